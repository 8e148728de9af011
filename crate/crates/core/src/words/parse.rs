//! Recursive-descent parser for the word grammar
//!
//! ```text
//! word := term { '*' term }
//! term := atom [ '^' integer ]
//! atom := 'x' k | '1' | '(' word ')' | '[' word ',' word ']'
//! ```
//!
//! Whitespace between tokens is ignored. `1` denotes the empty word.

use super::{FreeWord, WordError};

/// Parses `text` as a word over `d` generators.
pub fn parse_word(text: &str, d: usize) -> Result<FreeWord, WordError> {
    let mut parser = Parser {
        src: text.as_bytes(),
        pos: 0,
        d,
    };
    let w = parser.word()?;
    parser.skip_ws();
    if parser.pos != parser.src.len() {
        return Err(parser.error("unexpected trailing input"));
    }
    Ok(w)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    d: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> WordError {
        WordError::Syntax {
            position: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), WordError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", c as char)))
        }
    }

    fn word(&mut self) -> Result<FreeWord, WordError> {
        let mut w = self.term()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            w = w.multiply(&self.term()?)?;
        }
        Ok(w)
    }

    fn term(&mut self) -> Result<FreeWord, WordError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.integer()?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<FreeWord, WordError> {
        match self.peek() {
            Some(b'x') => {
                self.pos += 1;
                let start = self.pos;
                let k = self.digits()?;
                if k == 0 || k > self.d as u64 {
                    self.pos = start;
                    return Err(WordError::Index {
                        index: k as usize,
                        d: self.d,
                    });
                }
                FreeWord::generator(self.d, k as usize - 1)
            }
            Some(b'1') => {
                self.pos += 1;
                Ok(FreeWord::identity(self.d))
            }
            Some(b'(') => {
                self.pos += 1;
                let w = self.word()?;
                self.expect(b')')?;
                Ok(w)
            }
            Some(b'[') => {
                self.pos += 1;
                let u = self.word()?;
                self.expect(b',')?;
                let v = self.word()?;
                self.expect(b']')?;
                u.commutator(&v)
            }
            Some(_) => Err(self.error("expected a generator, '(' or '['")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    // Digits directly after 'x' (no whitespace allowed inside a generator name).
    fn digits(&mut self) -> Result<u64, WordError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected generator index"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.error("generator index too large"))
    }

    fn integer(&mut self) -> Result<i64, WordError> {
        self.skip_ws();
        let neg = match self.src.get(self.pos) {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected integer exponent"));
        }
        let v: i64 = std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.error("exponent out of range"))?;
        Ok(if neg { -v } else { v })
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::arb_word;
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn commutator_convention() {
        let w = parse_word("[x1,x2]", 2).unwrap();
        assert_eq!(w.to_string(), "x1^-1*x2^-1*x1*x2");
    }

    #[test]
    fn cancellation() {
        assert!(parse_word("x1*x1^-1", 1).unwrap().is_identity());
        assert!(parse_word("1", 3).unwrap().is_identity());
    }

    #[test]
    fn first_example_relator_has_fourteen_letters() {
        // [x4,x5] = x4^-1 x5^-1 x4 x5 (4 letters);
        // [[x2,x3],x1] = [x2,x3]^-1 x1^-1 [x2,x3] x1 = x3^-1 x2^-1 x3 x2 x1^-1 x2^-1 x3^-1 x2 x3 x1 (10 letters)
        let w = parse_word("[x4,x5]*[[x2,x3],x1]", 5).unwrap();
        assert_eq!(w.len(), 14);
        assert_eq!(
            w.to_string(),
            "x4^-1*x5^-1*x4*x5*x3^-1*x2^-1*x3*x2*x1^-1*x2^-1*x3^-1*x2*x3*x1"
        );
    }

    #[test]
    fn powers_and_grouping() {
        let w = parse_word("(x1*x2)^-2", 2).unwrap();
        assert_eq!(w.to_string(), "x2^-1*x1^-1*x2^-1*x1^-1");
        let w = parse_word(" x1 ^ 3 * x1^-1 ", 1).unwrap();
        assert_eq!(w.to_string(), "x1^2");
    }

    #[test]
    fn syntax_errors() {
        for bad in ["", "x", "x1*", "[x1,x2", "(x1", "x1^", "y1", "x1 x2", "[x1]"] {
            assert!(
                matches!(parse_word(bad, 3), Err(WordError::Syntax { .. })),
                "{bad:?} should be a syntax error"
            );
        }
    }

    #[test]
    fn index_errors() {
        assert!(matches!(
            parse_word("x4", 3),
            Err(WordError::Index { index: 4, d: 3 })
        ));
        assert!(matches!(parse_word("x0", 3), Err(WordError::Index { index: 0, .. })));
    }

    proptest! {
        #[test]
        fn commutator_text_matches_product(u in arb_word(3, 6), v in arb_word(3, 6)) {
            let parsed = parse_word(&format!("[{u},{v}]"), 3).unwrap();
            let built = u.invert()
                .multiply(&v.invert()).unwrap()
                .multiply(&u).unwrap()
                .multiply(&v).unwrap();
            prop_assert_eq!(parsed, built);
        }

        #[test]
        fn display_round_trip(u in arb_word(4, 10)) {
            prop_assert_eq!(parse_word(&u.to_string(), 4).unwrap(), u);
        }
    }
}
