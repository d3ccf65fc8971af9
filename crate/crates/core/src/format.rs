//! Text formats for sequences, instances and solutions.
//!
//! Sequence: `LEN OFFSET` then `LEN` integers. Instance: `n W` then `n`
//! lines `p w`. Solution: `OPT v` and optionally `ITEMS i1 i2 ...` (1-based).

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::knapsack::{Item, KnapsackInstance, KnapsackSolution};
use crate::seq::IntSeq;

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

/// Non-blank lines with their 1-based line numbers.
fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().map(|(k, l)| (k + 1, l.trim())).filter(|(_, l)| !l.is_empty())
}

fn numbers<T: std::str::FromStr>(line: usize, s: &str) -> Result<Vec<T>> {
    s.split_whitespace()
        .map(|tok| tok.parse::<T>().map_err(|_| parse_err(line, format!("invalid number `{tok}`"))))
        .collect()
}

pub fn parse_seq(text: &str) -> Result<IntSeq> {
    let mut it = lines(text);
    let (hline, header) = it.next().ok_or_else(|| parse_err(1, "missing header `LEN OFFSET`"))?;
    let head: Vec<usize> = numbers(hline, header)?;
    let [len, offset] = head[..] else {
        return Err(parse_err(hline, "header must be `LEN OFFSET`"));
    };
    if len == 0 {
        return Err(parse_err(hline, "LEN must be positive"));
    }
    let mut values = Vec::with_capacity(len);
    let mut last = hline;
    for (ln, l) in it {
        last = ln;
        values.extend(numbers::<i64>(ln, l)?);
        if values.len() > len {
            return Err(parse_err(ln, format!("more than {len} values")));
        }
    }
    if values.len() < len {
        return Err(parse_err(last, format!("expected {len} values, found {}", values.len())));
    }
    let seq = IntSeq::new(offset, values);
    seq.check_bounds()?;
    Ok(seq)
}

pub fn write_seq(seq: &IntSeq) -> String {
    let mut out = format!("{} {}\n", seq.len(), seq.offset());
    let body: Vec<String> = seq.values().iter().map(i64::to_string).collect();
    out.push_str(&body.join(" "));
    out.push('\n');
    out
}

pub fn parse_instance(text: &str) -> Result<KnapsackInstance> {
    let mut it = lines(text);
    let (hline, header) = it.next().ok_or_else(|| parse_err(1, "missing header `n W`"))?;
    let head: Vec<u64> = numbers(hline, header)?;
    let [n, cap] = head[..] else {
        return Err(parse_err(hline, "header must be `n W`"));
    };
    let mut items = Vec::with_capacity(n as usize);
    let mut last = hline;
    for (ln, l) in it {
        last = ln;
        let v: Vec<u64> = numbers(ln, l)?;
        let [p, w] = v[..] else {
            return Err(parse_err(ln, "item line must be `p w`"));
        };
        if p == 0 || w == 0 {
            return Err(parse_err(ln, "profit and weight must be positive"));
        }
        if items.len() as u64 == n {
            return Err(parse_err(ln, format!("more than {n} items")));
        }
        items.push(Item::new(p, w));
    }
    if (items.len() as u64) < n {
        return Err(parse_err(last, format!("expected {n} items, found {}", items.len())));
    }
    KnapsackInstance::new(items, cap)
}

pub fn write_instance(inst: &KnapsackInstance) -> String {
    let mut out = format!("{} {}\n", inst.n(), inst.capacity());
    for it in inst.items() {
        let _ = writeln!(out, "{} {}", it.profit, it.weight);
    }
    out
}

pub fn write_solution(sol: &KnapsackSolution, with_items: bool) -> String {
    let mut out = format!("OPT {}\n", sol.value);
    if with_items {
        out.push_str("ITEMS");
        for &i in &sol.chosen {
            let _ = write!(out, " {}", i + 1);
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seq_round_trip() {
        let s = IntSeq::new(3, vec![-4, 0, 17]);
        assert_eq!(parse_seq(&write_seq(&s)).unwrap(), s);
        assert_eq!(parse_seq("4 0\n1 2\n3\n  4\n").unwrap().values(), &[1, 2, 3, 4]);
    }

    #[test]
    fn seq_errors_name_lines() {
        let e = parse_seq("3 0\n1 x 3\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }), "{e}");
        assert!(matches!(parse_seq("3 0\n1 2\n").unwrap_err(), Error::Parse { line: 2, .. }));
        assert!(matches!(parse_seq("").unwrap_err(), Error::Parse { line: 1, .. }));
        assert!(matches!(parse_seq("2\n1 2").unwrap_err(), Error::Parse { line: 1, .. }));
    }

    #[test]
    fn instance_round_trip() {
        let text = "3 6\n3 2\n4 3\n5 4\n";
        let inst = parse_instance(text).unwrap();
        assert_eq!(inst.capacity(), 6);
        assert_eq!(write_instance(&inst), text);
        let e = parse_instance("2 6\n3 2\n4\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, .. }));
        assert!(matches!(parse_instance("1 6\n0 2\n").unwrap_err(), Error::Parse { line: 2, .. }));
    }

    #[test]
    fn solution_output() {
        let sol = KnapsackSolution { value: 8, chosen: vec![0, 2], weight: 6 };
        assert_eq!(write_solution(&sol, false), "OPT 8\n");
        assert_eq!(write_solution(&sol, true), "OPT 8\nITEMS 1 3\n");
    }
}
