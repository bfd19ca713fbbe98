//! Author-id validation.
//!
//! An author id is valid when it contains an email-shaped substring:
//! `[A-Za-z0-9._%+-]+ @ [A-Za-z0-9.-]+ \. [A-Za-z]{2,}` (unanchored, literal dot).
//! The scanner below is hand-written; the test suites check it against a
//! regex engine running that pattern.

fn is_local(b: u8) -> bool {
    b.is_ascii_alphanumeric() || matches!(b, b'.' | b'_' | b'%' | b'+' | b'-')
}

fn is_domain(b: u8) -> bool {
    b.is_ascii_alphanumeric() || matches!(b, b'.' | b'-')
}

/// True iff `author` contains an email address.
pub fn validate_author_id(author: &str) -> bool {
    let bytes = author.as_bytes();
    for (at, &b) in bytes.iter().enumerate() {
        if b != b'@' || at == 0 || !is_local(bytes[at - 1]) {
            continue;
        }
        // Maximal run of domain characters after the '@'.
        let start = at + 1;
        let end = bytes[start..]
            .iter()
            .position(|&c| !is_domain(c))
            .map_or(bytes.len(), |off| start + off);
        // At least one domain char before the dot, two letters after it.
        // Letters are domain chars, so they always fall inside the run.
        for dot in start + 1..end {
            if bytes[dot] == b'.'
                && dot + 2 < bytes.len()
                && bytes[dot + 1].is_ascii_alphabetic()
                && bytes[dot + 2].is_ascii_alphabetic()
            {
                return true;
            }
        }
    }
    false
}
