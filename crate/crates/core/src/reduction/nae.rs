//! Monotone not-all-equal 3-SAT where every variable occurs exactly four
//! times.

use std::fmt;

use thiserror::Error;

use crate::solver::{SolveError, BRUTE_FORCE_CAP};

/// Number of clauses each variable must occur in.
pub const OCCURRENCES: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NaeError {
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("line {line}: variable {var} out of range 1..={n}")]
    VariableOutOfRange { line: usize, var: usize, n: usize },
    #[error("clause {clause}: variable {var} appears more than once")]
    DuplicateVariable { clause: usize, var: usize },
    #[error("variable {var} occurs in {count} clauses, expected exactly 4")]
    OccurrenceCount { var: usize, count: usize },
    #[error("header announces {expected} clauses, found {found}")]
    ClauseCount { expected: usize, found: usize },
}

/// A validated instance. Variables and clauses are 0-based here and 1-based
/// in the text format; the order of variables inside a clause is kept.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NaeInstance {
    n: usize,
    clauses: Vec<[usize; 3]>,
}

impl NaeInstance {
    /// Validates 0-based clauses. Errors report 1-based indices.
    pub fn new(n: usize, clauses: Vec<[usize; 3]>) -> Result<Self, NaeError> {
        let mut count = vec![0usize; n];
        for (j, c) in clauses.iter().enumerate() {
            for (a, &x) in c.iter().enumerate() {
                if x >= n {
                    return Err(NaeError::VariableOutOfRange {
                        line: 0,
                        var: x + 1,
                        n,
                    });
                }
                if c[..a].contains(&x) {
                    return Err(NaeError::DuplicateVariable {
                        clause: j + 1,
                        var: x + 1,
                    });
                }
                count[x] += 1;
            }
        }
        if let Some((x, &c)) = count.iter().enumerate().find(|(_, &c)| c != OCCURRENCES) {
            return Err(NaeError::OccurrenceCount {
                var: x + 1,
                count: c,
            });
        }
        Ok(NaeInstance { n, clauses })
    }

    /// Number of variables.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of clauses.
    pub fn k(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[[usize; 3]] {
        &self.clauses
    }

    /// For each variable, its four occurrences `(clause, position)` in the
    /// order they are met when scanning clauses front to back.
    pub fn occurrences(&self) -> Vec<[(usize, usize); OCCURRENCES]> {
        let mut out = vec![Vec::with_capacity(OCCURRENCES); self.n];
        for (j, c) in self.clauses.iter().enumerate() {
            for (pos, &x) in c.iter().enumerate() {
                out[x].push((j, pos));
            }
        }
        out.into_iter()
            .map(|v| v.try_into().expect("validated occurrence count"))
            .collect()
    }

    /// Text form accepted by [`parse_nae`].
    pub fn to_text(&self) -> String {
        let mut s = format!("p nae3 {} {}\n", self.n, self.k());
        for c in &self.clauses {
            s.push_str(&format!("{} {} {}\n", c[0] + 1, c[1] + 1, c[2] + 1));
        }
        s
    }
}

/// Parses `p nae3 <n> <k>` followed by `k` clause lines of three distinct
/// 1-based variables. Blank lines and lines starting with `c` are skipped.
pub fn parse_nae(text: &str) -> Result<NaeInstance, NaeError> {
    let mut body = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('c'));
    let (hline, header) = body.next().ok_or(NaeError::Malformed {
        line: 1,
        reason: "missing header".into(),
    })?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    let (n, k) = match toks.as_slice() {
        ["p", "nae3", n, k] => (parse_num(hline, n)?, parse_num(hline, k)?),
        _ => {
            return Err(NaeError::Malformed {
                line: hline,
                reason: "expected header `p nae3 <n> <k>`".into(),
            })
        }
    };
    let mut clauses = Vec::with_capacity(k);
    for (line, l) in body {
        let nums = l
            .split_whitespace()
            .map(|t| parse_num(line, t))
            .collect::<Result<Vec<_>, _>>()?;
        let [a, b, c] = nums[..] else {
            return Err(NaeError::Malformed {
                line,
                reason: format!("expected 3 variables, found {}", nums.len()),
            });
        };
        for v in [a, b, c] {
            if v == 0 || v > n {
                return Err(NaeError::VariableOutOfRange { line, var: v, n });
            }
        }
        clauses.push([a - 1, b - 1, c - 1]);
    }
    if clauses.len() != k {
        return Err(NaeError::ClauseCount {
            expected: k,
            found: clauses.len(),
        });
    }
    NaeInstance::new(n, clauses)
}

fn parse_num(line: usize, tok: &str) -> Result<usize, NaeError> {
    tok.parse().map_err(|_| NaeError::Malformed {
        line,
        reason: format!("not a non-negative integer: {tok:?}"),
    })
}

/// Truth values for the variables of an instance.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment(pub Vec<u8>);

impl Assignment {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn value(&self, var: usize) -> u8 {
        self.0[var]
    }

    /// Parses one line of `0`/`1` characters.
    pub fn parse(text: &str) -> Result<Self, NaeError> {
        let line = text.lines().next().unwrap_or("").trim();
        line.chars()
            .enumerate()
            .map(|(i, c)| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(NaeError::Malformed {
                    line: 1,
                    reason: format!("character {} is {other:?}, expected 0 or 1", i + 1),
                }),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Assignment)
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// First clause whose variables all share a value.
pub fn first_unsatisfied(inst: &NaeInstance, a: &Assignment) -> Option<usize> {
    assert_eq!(a.len(), inst.n(), "assignment length");
    inst.clauses().iter().position(|c| {
        let v = a.value(c[0]);
        c.iter().all(|&x| a.value(x) == v)
    })
}

/// Every clause sees both values.
pub fn nae_eval(inst: &NaeInstance, a: &Assignment) -> bool {
    first_unsatisfied(inst, a).is_none()
}

/// Lexicographically first satisfying assignment, by exhaustive search.
pub fn brute_sat(inst: &NaeInstance) -> Result<Option<Assignment>, SolveError> {
    let n = inst.n();
    if n > BRUTE_FORCE_CAP {
        return Err(SolveError::TooLarge {
            n,
            cap: BRUTE_FORCE_CAP,
        });
    }
    let masks: Vec<u64> = inst
        .clauses()
        .iter()
        .map(|c| c.iter().fold(0u64, |m, &x| m | 1 << (n - 1 - x)))
        .collect();
    let found = (0..1u64 << n).find(|&bits| {
        masks.iter().all(|&m| {
            let ones = (bits & m).count_ones();
            ones != 0 && ones != 3
        })
    });
    Ok(found.map(|bits| Assignment((0..n).map(|x| ((bits >> (n - 1 - x)) & 1) as u8).collect())))
}

#[cfg(test)]
mod tests {
    use super::*;

    const FOUR_COPIES: &str = "p nae3 3 4\n1 2 3\n1 2 3\n1 2 3\n1 2 3\n";

    #[test]
    fn repeated_clause_instance_is_valid() {
        let inst = parse_nae(FOUR_COPIES).unwrap();
        assert_eq!((inst.n(), inst.k()), (3, 4));
        assert_eq!(inst.occurrences()[0], [(0, 0), (1, 0), (2, 0), (3, 0)]);
        assert_eq!(parse_nae(&inst.to_text()).unwrap(), inst);
    }

    #[test]
    fn occurrence_count_enforced() {
        let err = parse_nae("p nae3 3 3\n1 2 3\n1 2 3\n1 2 3\n").unwrap_err();
        assert_eq!(err, NaeError::OccurrenceCount { var: 1, count: 3 });
    }

    #[test]
    fn duplicate_variable_rejected() {
        let err = parse_nae("p nae3 3 4\n1 1 2\n1 2 3\n1 2 3\n1 2 3\n").unwrap_err();
        assert_eq!(err, NaeError::DuplicateVariable { clause: 1, var: 1 });
    }

    #[test]
    fn format_errors() {
        assert!(matches!(
            parse_nae("").unwrap_err(),
            NaeError::Malformed { .. }
        ));
        assert!(matches!(
            parse_nae("p cnf 3 4\n").unwrap_err(),
            NaeError::Malformed { line: 1, .. }
        ));
        assert!(matches!(
            parse_nae("p nae3 3 1\n1 2\n").unwrap_err(),
            NaeError::Malformed { line: 2, .. }
        ));
        assert_eq!(
            parse_nae("p nae3 3 1\n1 2 4\n").unwrap_err(),
            NaeError::VariableOutOfRange {
                line: 2,
                var: 4,
                n: 3
            }
        );
        assert_eq!(
            parse_nae("p nae3 3 2\n1 2 3\n").unwrap_err(),
            NaeError::ClauseCount {
                expected: 2,
                found: 1
            }
        );
        // comments and blank lines are skipped
        let inst = parse_nae("c four copies\np nae3 3 4\n\n1 2 3\n1 2 3\nc mid\n1 2 3\n1 2 3\n");
        assert!(inst.is_ok());
    }

    #[test]
    fn evaluation() {
        let inst = parse_nae(FOUR_COPIES).unwrap();
        assert!(nae_eval(&inst, &Assignment(vec![0, 0, 1])));
        assert!(!nae_eval(&inst, &Assignment(vec![1, 1, 1])));
        assert!(!nae_eval(&inst, &Assignment(vec![0, 0, 0])));
        assert_eq!(
            first_unsatisfied(&inst, &Assignment(vec![1, 1, 1])),
            Some(0)
        );
        let empty = NaeInstance::new(0, vec![]).unwrap();
        assert!(nae_eval(&empty, &Assignment(vec![])));
    }

    #[test]
    fn brute_sat_first_assignment() {
        let inst = parse_nae(FOUR_COPIES).unwrap();
        assert_eq!(brute_sat(&inst).unwrap(), Some(Assignment(vec![0, 0, 1])));
    }

    #[test]
    fn assignment_text() {
        let a = Assignment::parse("011\n").unwrap();
        assert_eq!(a, Assignment(vec![0, 1, 1]));
        assert_eq!(a.to_string(), "011");
        assert!(Assignment::parse("012").is_err());
    }
}
