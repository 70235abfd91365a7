//! Per-conductor data: the cyclotomic polynomial, reduced powers of the
//! generator and lazily built numeric tables.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer;
use spin::Mutex;

use super::numeric::{Table, LEVELS};
use crate::error::{Error, Result};

/// Largest conductor accepted. Tables grow quadratically with it.
pub const MAX_CONDUCTOR: u32 = 4096;

pub(crate) struct Field {
    pub(crate) n: u32,
    pub(crate) phi: usize,
    /// `powers[e]` is `x^e mod Phi_n` as a sparse integer vector, for `e < n`.
    pub(crate) powers: Vec<Vec<(usize, i64)>>,
    tables: Mutex<Vec<Option<Arc<Table>>>>,
}

static REGISTRY: Mutex<BTreeMap<u32, Arc<Field>>> = Mutex::new(BTreeMap::new());

pub(crate) fn field(n: u32) -> Result<Arc<Field>> {
    if n == 0 || n > MAX_CONDUCTOR {
        return Err(Error::BadConductor(u64::from(n)));
    }
    if let Some(f) = REGISTRY.lock().get(&n) {
        return Ok(f.clone());
    }
    // Built outside the lock; a racing thread may build the same field twice.
    let built = Arc::new(Field::build(n));
    Ok(REGISTRY.lock().entry(n).or_insert(built).clone())
}

impl Field {
    fn build(n: u32) -> Self {
        let poly = cyclotomic_poly(n);
        let phi = poly.len() - 1;
        let mut powers = Vec::with_capacity(n as usize);
        let mut cur: Vec<i128> = vec![0; phi];
        cur[0] = 1;
        for _ in 0..n {
            powers.push(
                cur.iter()
                    .enumerate()
                    .filter(|(_, c)| **c != 0)
                    .map(|(i, c)| (i, i64::try_from(*c).expect("coefficient overflow")))
                    .collect(),
            );
            // multiply by x and reduce by the monic polynomial
            let top = cur[phi - 1];
            for i in (1..phi).rev() {
                cur[i] = cur[i - 1];
            }
            cur[0] = 0;
            if top != 0 {
                for (i, c) in cur.iter_mut().enumerate() {
                    *c -= top * poly[i];
                }
            }
        }
        Field {
            n,
            phi,
            powers,
            tables: Mutex::new(vec![None; LEVELS]),
        }
    }

    pub(crate) fn table(&self, level: usize) -> Arc<Table> {
        if let Some(t) = &self.tables.lock()[level] {
            return t.clone();
        }
        let t = Arc::new(Table::build(self.n, self.phi, level));
        let mut guard = self.tables.lock();
        guard[level].get_or_insert(t).clone()
    }
}

/// Integer coefficients of the n-th cyclotomic polynomial, lowest degree first.
pub fn cyclotomic_poly(n: u32) -> Vec<i128> {
    let mut memo: BTreeMap<u32, Vec<i128>> = BTreeMap::new();
    cyclotomic_memo(n, &mut memo)
}

fn cyclotomic_memo(n: u32, memo: &mut BTreeMap<u32, Vec<i128>>) -> Vec<i128> {
    if let Some(p) = memo.get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by Phi_d for the proper divisors d
    let mut p = vec![0i128; n as usize + 1];
    p[0] = -1;
    p[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            let q = cyclotomic_memo(d, memo);
            p = div_monic(&p, &q);
        }
    }
    memo.insert(n, p.clone());
    p
}

fn div_monic(p: &[i128], q: &[i128]) -> Vec<i128> {
    let dq = q.len() - 1;
    let mut rem = p.to_vec();
    let mut out = vec![0i128; p.len() - dq];
    for k in (0..out.len()).rev() {
        let c = rem[k + dq];
        out[k] = c;
        if c != 0 {
            for (j, qj) in q.iter().enumerate() {
                rem[k + j] -= c * qj;
            }
        }
    }
    debug_assert!(rem.iter().all(|c| *c == 0));
    out
}

pub(crate) fn lcm(a: u32, b: u32) -> u32 {
    a.lcm(&b)
}
