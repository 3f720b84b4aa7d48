//! Two-input polarizing kernels `f: X^2 -> X` over the q-ary alphabet.
//!
//! A kernel is stored as a q x q table indexed `(u1, u2)`. It is a valid
//! polarizing kernel when every row and every column is a permutation of the
//! alphabet, i.e. `f` is invertible in each argument with the other fixed
//! (the table is a Latin square).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest alphabet for which [`Kernel::subgroup_anomaly`] enumerates subsets.
pub const MAX_SUBSET_Q: usize = 16;

/// The names accepted by [`Kernel::builtin`].
pub const BUILTIN_NAMES: &[&str] = &["standard", "sasoglu", "L3", "L4", "L5a", "L5b", "L8", "M4"];

/// A validated q x q polarizing kernel.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "KernelRepr", into = "KernelTable")]
pub struct Kernel {
    q: usize,
    label: String,
    table: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct KernelTable {
    q: usize,
    label: String,
    table: Vec<Vec<usize>>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum KernelRepr {
    Table {
        q: usize,
        #[serde(default)]
        label: Option<String>,
        table: Vec<Vec<usize>>,
    },
    Permutation {
        q: usize,
        #[serde(default)]
        label: Option<String>,
        pi: Vec<usize>,
    },
}

impl TryFrom<KernelRepr> for Kernel {
    type Error = Error;

    fn try_from(repr: KernelRepr) -> Result<Self> {
        match repr {
            KernelRepr::Table { q, label, table } => {
                if table.len() != q {
                    return Err(Error::AlphabetMismatch(q, table.len()));
                }
                Kernel::from_table(table, label.unwrap_or_else(|| "custom".into()))
            }
            KernelRepr::Permutation { q, label, pi } => {
                let mut k = Kernel::from_permutation(q, &pi)?;
                if let Some(label) = label {
                    k.label = label;
                }
                Ok(k)
            }
        }
    }
}

impl From<Kernel> for KernelTable {
    fn from(k: Kernel) -> Self {
        KernelTable {
            q: k.q,
            table: k.rows().map(<[usize]>::to_vec).collect(),
            label: k.label,
        }
    }
}

impl fmt::Debug for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Kernel")
            .field("label", &self.label)
            .field("q", &self.q)
            .field("table", &self.rows().collect::<Vec<_>>())
            .finish()
    }
}

fn is_permutation(values: impl Iterator<Item = usize>, q: usize) -> bool {
    let mut seen = vec![false; q];
    for v in values {
        if v >= q || seen[v] {
            return false;
        }
        seen[v] = true;
    }
    seen.iter().all(|&s| s)
}

/// Checks that `pi` is a permutation of `0..q`.
pub fn check_permutation(q: usize, pi: &[usize]) -> Result<()> {
    if pi.len() == q && is_permutation(pi.iter().copied(), q) {
        Ok(())
    } else {
        Err(Error::NotPermutation(q))
    }
}

/// The permutation `pi` of the kernel `u1 + pi(u2) mod q` that avoids the
/// subgroup anomaly for every q:
/// `pi(0) = floor(q/2)`, `pi(x) = x - 1` for `1 <= x <= floor(q/2)`, else `x`.
pub fn sasoglu_permutation(q: usize) -> Vec<usize> {
    let half = q / 2;
    (0..q)
        .map(|x| match x {
            0 => half,
            x if x <= half => x - 1,
            x => x,
        })
        .collect()
}

impl Kernel {
    /// Validates a table given as rows indexed by `u1`.
    pub fn from_table(rows: Vec<Vec<usize>>, label: impl Into<String>) -> Result<Self> {
        let q = rows.len();
        if q == 0 || rows.iter().any(|r| r.len() != q) {
            return Err(Error::NotSquare);
        }
        if q < 2 {
            return Err(Error::AlphabetTooSmall(q));
        }
        for (i, row) in rows.iter().enumerate() {
            if !is_permutation(row.iter().copied(), q) {
                return Err(Error::RowNotPermutation(i));
            }
        }
        for j in 0..q {
            if !is_permutation(rows.iter().map(|r| r[j]), q) {
                return Err(Error::ColumnNotPermutation(j));
            }
        }
        Ok(Kernel {
            q,
            label: label.into(),
            table: rows.into_iter().flatten().collect(),
        })
    }

    /// The kernel `f(u1, u2) = (u1 + pi(u2)) mod q`.
    pub fn from_permutation(q: usize, pi: &[usize]) -> Result<Self> {
        if q < 2 {
            return Err(Error::AlphabetTooSmall(q));
        }
        check_permutation(q, pi)?;
        let table = (0..q)
            .flat_map(|u1| pi.iter().map(move |&p| (u1 + p) % q))
            .collect();
        Ok(Kernel {
            q,
            label: format!("pi{pi:?}"),
            table,
        })
    }

    /// Addition mod q.
    pub fn standard(q: usize) -> Result<Self> {
        let pi: Vec<usize> = (0..q).collect();
        Ok(Self::from_permutation(q, &pi)?.with_label(format!("standard({q})")))
    }

    pub fn sasoglu(q: usize) -> Result<Self> {
        if q < 2 {
            return Err(Error::AlphabetTooSmall(q));
        }
        Ok(Self::from_permutation(q, &sasoglu_permutation(q))?.with_label(format!("sasoglu({q})")))
    }

    /// The non-permutation-type q = 4 kernel designed for the rotated 4-point set.
    pub fn m4() -> Self {
        let rows = vec![
            vec![0, 2, 1, 3],
            vec![1, 3, 0, 2],
            vec![2, 0, 3, 1],
            vec![3, 1, 2, 0],
        ];
        Self::from_table(rows, "M4").expect("M4 is a Latin square")
    }

    /// Looks up a named kernel. `standard` and `sasoglu` need `q`, either as
    /// an argument or written as `standard(5)`; `L5` is accepted for `L5b`.
    pub fn builtin(name: &str, q: Option<usize>) -> Result<Self> {
        let (base, inline_q) = match name.split_once('(') {
            Some((base, rest)) => {
                let n = rest
                    .strip_suffix(')')
                    .and_then(|n| n.trim().parse::<usize>().ok())
                    .ok_or_else(|| Error::UnknownKernel(name.to_string()))?;
                (base, Some(n))
            }
            None => (name, None),
        };
        let q = match (inline_q, q) {
            (Some(a), Some(b)) if a != b => return Err(Error::AlphabetMismatch(b, a)),
            (a, b) => a.or(b),
        };
        let perm = |want: usize, pi: &[usize], label: &str| -> Result<Kernel> {
            if let Some(q) = q {
                if q != want {
                    return Err(Error::AlphabetMismatch(q, want));
                }
            }
            Ok(Kernel::from_permutation(want, pi)?.with_label(label))
        };
        match base {
            "standard" => Self::standard(q.ok_or_else(|| Error::UnknownKernel(name.into()))?),
            "sasoglu" => Self::sasoglu(q.ok_or_else(|| Error::UnknownKernel(name.into()))?),
            "L3" => perm(3, &[0, 2, 1], "L3"),
            "L4" => perm(4, &[0, 2, 1, 3], "L4"),
            "L5a" => perm(5, &[0, 2, 4, 1, 3], "L5a"),
            "L5b" | "L5" => perm(5, &[0, 3, 1, 4, 2], "L5b"),
            "L8" => perm(8, &[0, 3, 6, 1, 4, 7, 2, 5], "L8"),
            "M4" => match q {
                Some(q) if q != 4 => Err(Error::AlphabetMismatch(q, 4)),
                _ => Ok(Self::m4()),
            },
            _ => Err(Error::UnknownKernel(name.to_string())),
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// `f(u1, u2)`.
    #[inline]
    pub fn apply(&self, u1: usize, u2: usize) -> usize {
        self.table[u1 * self.q + u2]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[usize]> {
        self.table.chunks(self.q)
    }

    /// Flat row-major table.
    pub fn table(&self) -> &[usize] {
        &self.table
    }

    /// The unique `u1` with `f(u1, u2) = x1`.
    pub fn solve_u1(&self, x1: usize, u2: usize) -> usize {
        (0..self.q)
            .find(|&u1| self.apply(u1, u2) == x1)
            .expect("columns of a validated kernel are permutations")
    }

    /// The unique `u2` with `f(u1, u2) = x1`.
    pub fn solve_u2(&self, u1: usize, x1: usize) -> usize {
        (0..self.q)
            .find(|&u2| self.apply(u1, u2) == x1)
            .expect("rows of a validated kernel are permutations")
    }

    /// Recovers `pi` when the kernel is of the form `u1 + pi(u2) mod q`.
    pub fn as_permutation(&self) -> Option<Vec<usize>> {
        let q = self.q;
        let pi: Vec<usize> = (0..q).map(|u2| self.apply(0, u2)).collect();
        let matches = (0..q).all(|u1| (0..q).all(|u2| self.apply(u1, u2) == (u1 + pi[u2]) % q));
        matches.then_some(pi)
    }

    /// Finds a symbol subset `S` with `1 < |S| < q` closed under `f`.
    ///
    /// Subsets are scanned by increasing size, then lexicographically, so the
    /// smallest closed subset is returned.
    pub fn subgroup_anomaly(&self) -> Result<Option<Vec<usize>>> {
        let q = self.q;
        if q > MAX_SUBSET_Q {
            return Err(Error::AlphabetTooLarge(q));
        }
        for size in 2..q {
            let mut found = None;
            for_each_combination(q, size, |subset| {
                let mut member = [false; MAX_SUBSET_Q];
                for &s in subset {
                    member[s] = true;
                }
                let closed = subset
                    .iter()
                    .all(|&a| subset.iter().all(|&b| member[self.apply(a, b)]));
                if closed {
                    found = Some(subset.to_vec());
                }
                closed
            });
            if found.is_some() {
                return Ok(found);
            }
        }
        Ok(None)
    }

    /// For every K-subset `{a_0..a_{K-1}}` of the alphabet, checks that the
    /// K x K matrix `B_ij = f(a_i, a_j)` has at least `K + 1` distinct entries.
    pub fn distinct_entries_check(&self, k: usize) -> Result<bool> {
        let q = self.q;
        if k < 2 || k + 1 > q {
            return Err(Error::InvalidSubsetSize { k, q });
        }
        let mut ok = true;
        let mut seen = vec![false; q];
        for_each_combination(q, k, |subset| {
            seen.iter_mut().for_each(|s| *s = false);
            let mut distinct = 0;
            for &a in subset {
                for &b in subset {
                    let v = self.apply(a, b);
                    if !seen[v] {
                        seen[v] = true;
                        distinct += 1;
                    }
                }
            }
            if distinct < k + 1 {
                ok = false;
            }
            !ok
        });
        Ok(ok)
    }
}

/// Calls `visit` on each k-subset of `0..n` in lexicographic order until it
/// returns `true`.
pub(crate) fn for_each_combination(n: usize, k: usize, mut visit: impl FnMut(&[usize]) -> bool) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if visit(&idx) {
            return;
        }
        // advance to the next combination
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] < n - k + i {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in (i + 1)..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Per-stage kernels of a length `2^n` code. Stage 1 sits next to the inputs
/// `u`, stage `n` (the channel stage) next to the modulator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelSchedule {
    stages: Vec<Kernel>,
}

impl KernelSchedule {
    pub fn new(stages: Vec<Kernel>) -> Result<Self> {
        let Some(first) = stages.first() else {
            return Err(Error::ScheduleLength { got: 0, want: 1 });
        };
        let q = first.q();
        if let Some(k) = stages.iter().find(|k| k.q() != q) {
            return Err(Error::AlphabetMismatch(q, k.q()));
        }
        Ok(KernelSchedule { stages })
    }

    /// The same kernel at every stage.
    pub fn uniform(kernel: &Kernel, n: usize) -> Result<Self> {
        Self::new(vec![kernel.clone(); n])
    }

    /// `kernel` at the channel stage, `base` at stages `1..n-1`.
    pub fn channel_stage_only(kernel: &Kernel, base: &Kernel, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::ScheduleLength { got: 0, want: 1 });
        }
        let mut stages = vec![base.clone(); n - 1];
        stages.push(kernel.clone());
        Self::new(stages)
    }

    pub fn q(&self) -> usize {
        self.stages[0].q()
    }

    pub fn len(&self) -> usize {
        self.stages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stages.is_empty()
    }

    /// Kernel at 1-based stage `t`.
    pub fn stage(&self, t: usize) -> &Kernel {
        &self.stages[t - 1]
    }

    pub fn stages(&self) -> &[Kernel] {
        &self.stages
    }

    pub fn labels(&self) -> Vec<String> {
        self.stages.iter().map(|k| k.label().to_string()).collect()
    }
}


#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    fn perm_strategy() -> impl Strategy<Value = Vec<usize>> {
        (2usize..=12).prop_flat_map(|q| Just((0..q).collect::<Vec<_>>()).prop_shuffle())
    }

    proptest! {
        #[test]
        fn permutation_round_trip(pi in perm_strategy()) {
            let q = pi.len();
            let k = Kernel::from_permutation(q, &pi).unwrap();
            prop_assert_eq!(k.as_permutation().unwrap(), pi.clone());
            for u1 in 0..q {
                for u2 in 0..q {
                    let x1 = k.apply(u1, u2);
                    prop_assert_eq!(k.solve_u1(x1, u2), u1);
                    prop_assert_eq!(k.solve_u2(u1, x1), u2);
                }
            }
            let rows: Vec<Vec<usize>> = k.rows().map(<[usize]>::to_vec).collect();
            prop_assert!(Kernel::from_table(rows, "copy").is_ok());
        }
    }
}
