// SPDX-License-Identifier: Apache-2.0

use super::AstError;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Class {
    Lower,
    Upper,
    Digit,
    Other,
}

fn class(c: char) -> Class {
    if c.is_uppercase() {
        Class::Upper
    } else if c.is_alphabetic() {
        Class::Lower
    } else if c.is_numeric() {
        Class::Digit
    } else {
        Class::Other
    }
}

/// Splits a token value into lowercase subtokens on camelCase boundaries,
/// non-alphanumeric separators and letter/digit transitions.
///
/// `toString` gives `["to", "string"]`; `parse_HTTPResponse2` gives
/// `["parse", "http", "response", "2"]`. A value without any alphanumeric
/// character (an operator such as `+`) is kept whole as one subtoken.
pub fn split_subtokens(value: &str) -> Result<Vec<String>, AstError> {
    if value.is_empty() {
        return Err(AstError::EmptyValue);
    }
    let chars: Vec<char> = value.chars().collect();
    let mut out = Vec::new();
    let mut cur = String::new();
    let flush = |cur: &mut String, out: &mut Vec<String>| {
        if !cur.is_empty() {
            out.push(cur.to_lowercase());
            cur.clear();
        }
    };
    for (i, &c) in chars.iter().enumerate() {
        let k = class(c);
        if k == Class::Other {
            flush(&mut cur, &mut out);
            continue;
        }
        if let Some(&prev) = i.checked_sub(1).map(|j| &chars[j]) {
            let pk = class(prev);
            let next_lower = chars
                .get(i + 1)
                .map(|&n| class(n) == Class::Lower)
                .unwrap_or(false);
            let boundary = match (pk, k) {
                (Class::Lower, Class::Upper) => true,
                // "HTTPResponse": the last capital starts the next word.
                (Class::Upper, Class::Upper) => next_lower,
                (Class::Digit, Class::Lower | Class::Upper) => true,
                (Class::Lower | Class::Upper, Class::Digit) => true,
                _ => false,
            };
            if boundary {
                flush(&mut cur, &mut out);
            }
        }
        cur.push(c);
    }
    flush(&mut cur, &mut out);
    if out.is_empty() {
        out.push(value.to_lowercase());
    }
    Ok(out)
}
