//! Reference generator used for the left-hand side of every identity.
//!
//! Works on `'0'`/`'1'` text and top-down memoized recursion straight from the
//! defining recurrence, so it shares no code path with [`crate::word`].

use std::collections::HashMap;

use crate::word::{Convention, Params};

pub struct Oracle {
    a: usize,
    b: usize,
    classical: bool,
    memo: HashMap<u32, String>,
}

impl Oracle {
    pub fn new(params: &Params) -> Self {
        Oracle {
            a: params.a() as usize,
            b: params.b() as usize,
            classical: params.convention() == Convention::ClassicalSwapped,
            memo: HashMap::new(),
        }
    }

    fn text(&mut self, n: u32) -> &str {
        if !self.memo.contains_key(&n) {
            let value = match n {
                0 if self.classical => "1".to_string(),
                0 => "0".to_string(),
                1 if self.classical => "0".to_string(),
                1 => format!("{}1", "0".repeat(self.a - 1)),
                _ => {
                    let times = if n % 2 == 0 { self.a } else { self.b };
                    let older = self.text(n - 2).to_string();
                    let newer = self.text(n - 1).repeat(times);
                    newer + &older
                }
            };
            self.memo.insert(n, value);
        }
        &self.memo[&n]
    }

    /// `f(n)` as symbols 0/1.
    pub fn f(&mut self, n: u32) -> Vec<u8> {
        self.text(n).bytes().map(|c| c - b'0').collect()
    }

    /// `t(n)`; `None` when `f(n)` has fewer than two symbols.
    pub fn t(&mut self, n: u32) -> Option<Vec<u8>> {
        let mut w = self.f(n);
        let len = w.len();
        if len < 2 {
            return None;
        }
        w.swap(len - 1, len - 2);
        Some(w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn agrees_with_displayed_words() {
        let mut o = Oracle::new(&Params::new(2, 3).unwrap());
        assert_eq!(o.f(3), b"01010010100101001".map(|c| c - b'0').to_vec());
        let mut c = Oracle::new(&Params::classical());
        assert_eq!(c.f(5), vec![0, 1, 0, 0, 1, 0, 1, 0]);
        assert_eq!(Oracle::new(&Params::new(1, 3).unwrap()).t(1), None);
    }
}
