//! Nonnegative integer solutions of `A·x = b, x ≥ lo`.
//!
//! Branch and bound over an exact rational simplex (Bland's rule, two
//! phases) that minimises `Σ x`. Arithmetic runs on `Ratio<i128>` with
//! checked operations and restarts on big rationals if anything overflows.
//!
//! Termination rests on the bound of Papadimitriou (1981): if `A·y = b,
//! y ≥ 0` with `A` an `m × n` integer matrix has an integer solution, it has
//! one with every entry at most `n·(m·a)^(2m+1)`, where `a` bounds the
//! absolute values of the entries of `A` and `b`. Branches that force a
//! variable above this cap are dropped; every other branch lives in a finite
//! box, so the search is finite and still complete. To keep it from
//! walking towards the cap in practice, each node also pins variables the
//! relaxation cannot raise, propagates bounds, and refutes small boxes case by
//! case with a lattice test.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, ToPrimitive};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Equation {
    pub coeffs: Vec<i64>,
    pub rhs: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSystem {
    num_vars: usize,
    equations: Vec<Equation>,
    lower_bounds: Vec<u64>,
}

impl LinearSystem {
    pub fn new(num_vars: usize) -> Self {
        LinearSystem {
            num_vars,
            equations: Vec::new(),
            lower_bounds: vec![0; num_vars],
        }
    }

    /// Panics if the row length differs from the variable count.
    pub fn add_equation(&mut self, coeffs: Vec<i64>, rhs: i64) {
        assert_eq!(coeffs.len(), self.num_vars, "coefficient row length");
        self.equations.push(Equation { coeffs, rhs });
    }

    pub fn set_lower_bound(&mut self, var: usize, bound: u64) {
        self.lower_bounds[var] = bound;
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn equations(&self) -> &[Equation] {
        &self.equations
    }

    pub fn lower_bounds(&self) -> &[u64] {
        &self.lower_bounds
    }

    pub fn is_satisfied_by(&self, x: &[u64]) -> bool {
        x.len() == self.num_vars
            && x.iter().zip(&self.lower_bounds).all(|(v, lo)| v >= lo)
            && self.equations.iter().all(|e| {
                let lhs: i128 = e
                    .coeffs
                    .iter()
                    .zip(x)
                    .map(|(a, v)| *a as i128 * *v as i128)
                    .sum();
                lhs == e.rhs as i128
            })
    }
}

/// A solution of `sys` over ℕ, or `None` when there is none.
pub fn solve_nonneg(sys: &LinearSystem) -> Option<Vec<u64>> {
    let n = sys.num_vars;
    let lo: Vec<i128> = sys.lower_bounds.iter().map(|&b| b as i128).collect();
    let mut rows: Vec<(Vec<i128>, i128)> = Vec::with_capacity(sys.equations.len());
    for e in &sys.equations {
        let a: Vec<i128> = e.coeffs.iter().map(|&c| c as i128).collect();
        let shift: i128 = a.iter().zip(&lo).map(|(c, l)| c * l).sum();
        let rhs = e.rhs as i128 - shift;
        if a.iter().all(|&c| c == 0) {
            if rhs != 0 {
                return None;
            }
            continue;
        }
        rows.push((a, rhs));
    }
    if rows.is_empty() {
        return Some(sys.lower_bounds.clone());
    }
    if lattice_infeasible(&rows, n) {
        return None;
    }
    let cap = papadimitriou_cap(&rows, n);
    let y = match branch_and_bound::<Ratio<i128>>(&rows, n, cap) {
        Ok(y) => y,
        Err(Overflow) => {
            branch_and_bound::<BigRational>(&rows, n, cap).expect("big rationals do not overflow")
        }
    }?;
    let x: Vec<u64> = y
        .iter()
        .zip(&lo)
        .map(|(v, l)| u64::try_from(v + l).expect("solution entry fits u64"))
        .collect();
    debug_assert!(sys.is_satisfied_by(&x));
    Some(x)
}

/// `n·(m·a)^(2m+1)`, saturating.
fn papadimitriou_cap(rows: &[(Vec<i128>, i128)], n: usize) -> i128 {
    let m = rows.len() as u32;
    let a = rows
        .iter()
        .flat_map(|(r, b)| r.iter().chain(std::iter::once(b)))
        .map(|v| v.unsigned_abs())
        .max()
        .unwrap_or(1)
        .max(1);
    (m as u128)
        .checked_mul(a)
        .and_then(|ma| ma.checked_pow(2 * m + 1))
        .and_then(|p| p.checked_mul(n as u128))
        .and_then(|c| i128::try_from(c).ok())
        .unwrap_or(i128::MAX)
}

/// True only if `A·y = b` has no solution over ℤ. Column-style Hermite
/// reduction: unimodular column operations bring `A` to lower echelon form,
/// then forward substitution checks divisibility. Overflow answers "unknown"
/// (false).
fn lattice_infeasible(rows: &[(Vec<i128>, i128)], n: usize) -> bool {
    fn run(rows: &[(Vec<i128>, i128)], n: usize) -> Option<bool> {
        let mut m: Vec<Vec<i128>> = rows.iter().map(|(r, _)| r.clone()).collect();
        let mut pivots = vec![None; m.len()];
        let mut width = vec![0; m.len()];
        let mut k = 0;
        for r in 0..m.len() {
            width[r] = k;
            while let Some(c) = (k..n)
                .filter(|&c| m[r][c] != 0)
                .min_by_key(|&c| m[r][c].unsigned_abs())
            {
                for row in m.iter_mut() {
                    row.swap(c, k);
                }
                let mut clean = true;
                for c2 in k + 1..n {
                    if m[r][c2] == 0 {
                        continue;
                    }
                    let q = m[r][c2] / m[r][k];
                    for row in m.iter_mut() {
                        row[c2] = row[c2].checked_sub(q.checked_mul(row[k])?)?;
                    }
                    if m[r][c2] != 0 {
                        clean = false;
                    }
                }
                if clean {
                    pivots[r] = Some(k);
                    k += 1;
                    break;
                }
            }
        }
        let mut z = vec![0i128; n];
        for r in 0..m.len() {
            let upto = pivots[r].unwrap_or(width[r]);
            let mut s = rows[r].1;
            for (c, zc) in z.iter().enumerate().take(upto) {
                s = s.checked_sub(m[r][c].checked_mul(*zc)?)?;
            }
            match pivots[r] {
                Some(p) => {
                    if s % m[r][p] != 0 {
                        return Some(true);
                    }
                    z[p] = s / m[r][p];
                }
                None => {
                    if s != 0 {
                        return Some(true);
                    }
                }
            }
        }
        Some(false)
    }
    run(rows, n).unwrap_or(false)
}

#[derive(Debug, Clone, Copy)]
struct Overflow;

/// The exact number types the simplex runs on.
trait Field: Clone + Ord + fmt::Debug {
    fn int(v: i128) -> Self;
    fn add(&self, o: &Self) -> Result<Self, Overflow>;
    fn sub(&self, o: &Self) -> Result<Self, Overflow>;
    fn mul(&self, o: &Self) -> Result<Self, Overflow>;
    fn div(&self, o: &Self) -> Result<Self, Overflow>;
    fn is_int(&self) -> bool;
    /// `None` when the floor does not fit an `i128`.
    fn floor_i128(&self) -> Option<i128>;

    fn sign(&self) -> Ordering {
        self.cmp(&Self::int(0))
    }
}

impl Field for Ratio<i128> {
    fn int(v: i128) -> Self {
        Ratio::from_integer(v)
    }
    fn add(&self, o: &Self) -> Result<Self, Overflow> {
        CheckedAdd::checked_add(self, o).ok_or(Overflow)
    }
    fn sub(&self, o: &Self) -> Result<Self, Overflow> {
        CheckedSub::checked_sub(self, o).ok_or(Overflow)
    }
    fn mul(&self, o: &Self) -> Result<Self, Overflow> {
        CheckedMul::checked_mul(self, o).ok_or(Overflow)
    }
    fn div(&self, o: &Self) -> Result<Self, Overflow> {
        CheckedDiv::checked_div(self, o).ok_or(Overflow)
    }
    fn is_int(&self) -> bool {
        self.is_integer()
    }
    fn floor_i128(&self) -> Option<i128> {
        Some(self.floor().to_integer())
    }
}

impl Field for BigRational {
    fn int(v: i128) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn add(&self, o: &Self) -> Result<Self, Overflow> {
        Ok(self + o)
    }
    fn sub(&self, o: &Self) -> Result<Self, Overflow> {
        Ok(self - o)
    }
    fn mul(&self, o: &Self) -> Result<Self, Overflow> {
        Ok(self * o)
    }
    fn div(&self, o: &Self) -> Result<Self, Overflow> {
        Ok(self / o)
    }
    fn is_int(&self) -> bool {
        self.is_integer()
    }
    fn floor_i128(&self) -> Option<i128> {
        self.floor().to_integer().to_i128()
    }
}

enum Lp<T> {
    Infeasible,
    Optimal { z: Vec<T>, value: T },
}

/// `min c·z` subject to `A·z = b`, `z ≥ 0`, with `c ≥ 0` (so the optimum is
/// bounded whenever the program is feasible).
fn simplex<T: Field>(a: &[Vec<T>], b: &[T], c: &[T]) -> Result<Lp<T>, Overflow> {
    let rows = a.len();
    let cols = c.len();
    let zero = T::int(0);
    // tableau over structural + artificial columns, rhs kept separately
    let mut tab: Vec<Vec<T>> = Vec::with_capacity(rows);
    let mut rhs: Vec<T> = Vec::with_capacity(rows);
    for i in 0..rows {
        let mut row = a[i].clone();
        let mut bi = b[i].clone();
        if bi.sign() == Ordering::Less {
            for v in row.iter_mut() {
                *v = zero.sub(v)?;
            }
            bi = zero.sub(&bi)?;
        }
        row.extend((0..rows).map(|k| T::int(i128::from(k == i))));
        tab.push(row);
        rhs.push(bi);
    }
    let total = cols + rows;
    let mut basis: Vec<usize> = (cols..total).collect();
    let mut allowed = vec![true; total];

    // phase 1: minimise the sum of artificials
    let mut reduced = vec![zero.clone(); total];
    let mut value = zero.clone();
    for i in 0..rows {
        for j in 0..cols {
            reduced[j] = reduced[j].sub(&tab[i][j])?;
        }
        value = value.add(&rhs[i])?;
    }
    pivot_loop(
        &mut tab,
        &mut rhs,
        &mut basis,
        &mut reduced,
        &mut value,
        &allowed,
    )?;
    if value.sign() != Ordering::Equal {
        return Ok(Lp::Infeasible);
    }

    // drive artificials out of the basis; rows where that fails are redundant
    let mut i = 0;
    while i < tab.len() {
        if basis[i] >= cols {
            if let Some(j) = (0..cols).find(|&j| tab[i][j].sign() != Ordering::Equal) {
                pivot(
                    &mut tab,
                    &mut rhs,
                    &mut basis,
                    &mut reduced,
                    &mut value,
                    i,
                    j,
                )?;
            } else {
                tab.remove(i);
                rhs.remove(i);
                basis.remove(i);
                continue;
            }
        }
        i += 1;
    }
    for flag in allowed.iter_mut().skip(cols) {
        *flag = false;
    }

    // phase 2
    let mut reduced: Vec<T> = (0..total)
        .map(|j| if j < cols { c[j].clone() } else { zero.clone() })
        .collect();
    let mut value = zero.clone();
    for i in 0..tab.len() {
        let cb = c[basis[i]].clone();
        if cb.sign() == Ordering::Equal {
            continue;
        }
        for j in 0..total {
            reduced[j] = reduced[j].sub(&cb.mul(&tab[i][j])?)?;
        }
        value = value.add(&cb.mul(&rhs[i])?)?;
    }
    pivot_loop(
        &mut tab,
        &mut rhs,
        &mut basis,
        &mut reduced,
        &mut value,
        &allowed,
    )?;

    let mut z = vec![zero; cols];
    for (i, &bv) in basis.iter().enumerate() {
        z[bv] = rhs[i].clone();
    }
    Ok(Lp::Optimal { z, value })
}

fn pivot_loop<T: Field>(
    tab: &mut [Vec<T>],
    rhs: &mut [T],
    basis: &mut [usize],
    reduced: &mut [T],
    value: &mut T,
    allowed: &[bool],
) -> Result<(), Overflow> {
    // Bland's rule: lowest entering index, ties in the ratio test broken by
    // lowest basic index; this cannot cycle
    while let Some(j) =
        (0..reduced.len()).find(|&j| allowed[j] && reduced[j].sign() == Ordering::Less)
    {
        let mut best: Option<(usize, T)> = None;
        for i in 0..tab.len() {
            if tab[i][j].sign() != Ordering::Greater {
                continue;
            }
            let ratio = rhs[i].div(&tab[i][j])?;
            let better = match &best {
                None => true,
                Some((bi, br)) => match ratio.cmp(br) {
                    Ordering::Less => true,
                    Ordering::Equal => basis[i] < basis[*bi],
                    Ordering::Greater => false,
                },
            };
            if better {
                best = Some((i, ratio));
            }
        }
        let (i, _) = best.expect("objective bounded below by construction");
        pivot(tab, rhs, basis, reduced, value, i, j)?;
    }
    Ok(())
}

fn pivot<T: Field>(
    tab: &mut [Vec<T>],
    rhs: &mut [T],
    basis: &mut [usize],
    reduced: &mut [T],
    value: &mut T,
    i: usize,
    j: usize,
) -> Result<(), Overflow> {
    let p = tab[i][j].clone();
    for v in tab[i].iter_mut() {
        *v = v.div(&p)?;
    }
    rhs[i] = rhs[i].div(&p)?;
    let (pivot_row, pivot_rhs) = (tab[i].clone(), rhs[i].clone());
    for k in 0..tab.len() {
        if k == i || tab[k][j].sign() == Ordering::Equal {
            continue;
        }
        let f = tab[k][j].clone();
        for (v, pv) in tab[k].iter_mut().zip(&pivot_row) {
            *v = v.sub(&f.mul(pv)?)?;
        }
        rhs[k] = rhs[k].sub(&f.mul(&pivot_rhs)?)?;
    }
    let f = reduced[j].clone();
    if f.sign() != Ordering::Equal {
        for (v, pv) in reduced.iter_mut().zip(&pivot_row) {
            *v = v.sub(&f.mul(pv)?)?;
        }
        *value = value.add(&f.mul(&pivot_rhs)?)?;
    }
    basis[i] = j;
    Ok(())
}

struct BranchAndBound<'a> {
    rows: &'a [(Vec<i128>, i128)],
    n: usize,
    cap: i128,
    best: Option<(i128, Vec<i128>)>,
}

fn branch_and_bound<T: Field>(
    rows: &[(Vec<i128>, i128)],
    n: usize,
    cap: i128,
) -> Result<Option<Vec<i128>>, Overflow> {
    let mut bb = BranchAndBound {
        rows,
        n,
        cap,
        best: None,
    };
    bb.search::<T>()?;
    Ok(bb.best.map(|(_, y)| y))
}

impl BranchAndBound<'_> {
    /// The LP relaxation over the box `lo ≤ y ≤ hi`, in shifted variables
    /// `z = y - lo`; upper bounds become slack rows.
    fn relaxation<T: Field>(
        &self,
        lo: &[i128],
        hi: &[Option<i128>],
    ) -> Result<Option<(Vec<T>, T)>, Overflow> {
        let bounded: Vec<usize> = (0..self.n).filter(|&j| hi[j].is_some()).collect();
        let cols = self.n + bounded.len();
        let mut a = Vec::with_capacity(self.rows.len() + bounded.len());
        let mut b = Vec::with_capacity(a.capacity());
        for (r, rhs) in self.rows {
            let mut row: Vec<T> = r.iter().map(|&v| T::int(v)).collect();
            row.resize(cols, T::int(0));
            let shift = r
                .iter()
                .zip(lo)
                .try_fold(0i128, |s, (v, l)| s.checked_add((*v).checked_mul(*l)?))
                .ok_or(Overflow)?;
            a.push(row);
            b.push(T::int((*rhs).checked_sub(shift).ok_or(Overflow)?));
        }
        for (k, &j) in bounded.iter().enumerate() {
            let width = hi[j].expect("bounded") - lo[j];
            if width < 0 {
                return Ok(None);
            }
            let mut row = vec![T::int(0); cols];
            row[j] = T::int(1);
            row[self.n + k] = T::int(1);
            a.push(row);
            b.push(T::int(width));
        }
        let c: Vec<T> = (0..cols).map(|j| T::int(i128::from(j < self.n))).collect();
        Ok(match simplex(&a, &b, &c)? {
            Lp::Infeasible => None,
            Lp::Optimal { z, value } => Some((z, value)),
        })
    }

    /// True if no integer point of the box satisfies the equations: every
    /// assignment of the bounded variables (up to `CASES` in total) is
    /// substituted and refuted. Without this a
    /// node can be integer-infeasible by divisibility while its LP
    /// relaxation is unbounded, and the search would only stop at the cap.
    fn bounded_part_infeasible(&self, lo: &[i128], hi: &[Option<i128>]) -> bool {
        const CASES: i128 = 256;
        let bounded: Vec<usize> = (0..self.n).filter(|&j| hi[j].is_some()).collect();
        if bounded.is_empty() {
            return self.refuted_with(&[], &[], lo, hi);
        }
        let mut cases: i128 = 1;
        for &j in &bounded {
            cases = cases.saturating_mul(hi[j].expect("bounded") - lo[j] + 1);
            if cases > CASES {
                return false;
            }
        }
        let mut value: Vec<i128> = bounded.iter().map(|&j| lo[j]).collect();
        loop {
            if !self.refuted_with(&bounded, &value, lo, hi) {
                return false;
            }
            // next assignment, odometer style
            let mut k = 0;
            loop {
                if k == bounded.len() {
                    return true;
                }
                let j = bounded[k];
                if value[k] < hi[j].expect("bounded") {
                    value[k] += 1;
                    break;
                }
                value[k] = lo[j];
                k += 1;
            }
        }
    }

    /// The equations with `vars[k] = values[k]` substituted have no solution
    /// in the box `lo ≤ y ≤ hi`. Rows left with one free variable fix it;
    /// rows whose range over the box misses the right-hand side refute; what
    /// remains goes to the lattice test. Overflow answers false.
    fn refuted_with(
        &self,
        vars: &[usize],
        values: &[i128],
        lo: &[i128],
        hi: &[Option<i128>],
    ) -> bool {
        let mut fixed: Vec<Option<i128>> = vec![None; self.n];
        for (&j, &v) in vars.iter().zip(values) {
            fixed[j] = Some(v);
        }
        self.propagate(&mut fixed, lo, hi).unwrap_or(false)
    }

    fn propagate(
        &self,
        fixed: &mut [Option<i128>],
        lo: &[i128],
        hi: &[Option<i128>],
    ) -> Option<bool> {
        loop {
            let mut changed = false;
            let mut rest = Vec::with_capacity(self.rows.len());
            for (r, rhs) in self.rows {
                let mut b = *rhs;
                let mut row = r.clone();
                // range of the free part over the box; None = unbounded
                let (mut min, mut max) = (Some(0i128), Some(0i128));
                let mut free = None;
                let mut count = 0;
                for j in 0..self.n {
                    if r[j] == 0 {
                        continue;
                    }
                    if let Some(v) = fixed[j] {
                        b = b.checked_sub(r[j].checked_mul(v)?)?;
                        row[j] = 0;
                        continue;
                    }
                    count += 1;
                    free = Some(j);
                    let a = r[j].checked_mul(lo[j])?;
                    let c = match hi[j] {
                        Some(h) => Some(r[j].checked_mul(h)?),
                        None => None,
                    };
                    let (l, u) = if r[j] > 0 { (Some(a), c) } else { (c, Some(a)) };
                    min = match (min, l) {
                        (Some(m), Some(l)) => Some(m.checked_add(l)?),
                        _ => None,
                    };
                    max = match (max, u) {
                        (Some(m), Some(u)) => Some(m.checked_add(u)?),
                        _ => None,
                    };
                }
                if min.is_some_and(|m| m > b) || max.is_some_and(|m| m < b) {
                    return Some(true);
                }
                match (count, free) {
                    (0, _) => {}
                    (1, Some(j)) => {
                        if b % r[j] != 0 {
                            return Some(true);
                        }
                        let v = b / r[j];
                        if v < lo[j] || hi[j].is_some_and(|h| v > h) {
                            return Some(true);
                        }
                        fixed[j] = Some(v);
                        changed = true;
                    }
                    _ => rest.push((row, b)),
                }
            }
            if !changed {
                return Some(lattice_infeasible(&rest, self.n));
            }
        }
    }

    /// A variable that cannot exceed its lower bound in any integer point of
    /// the box (the relaxation with `y_j ≥ lo_j + 1` is infeasible) is pinned
    /// there. Returns the tightened upper bounds if anything was pinned.
    fn pin_forced<T: Field>(
        &self,
        lo: &[i128],
        hi: &[Option<i128>],
    ) -> Result<Option<Vec<Option<i128>>>, Overflow> {
        let mut pinned = hi.to_vec();
        let mut any = false;
        let mut raised = lo.to_vec();
        for j in 0..self.n {
            if hi[j] == Some(lo[j]) {
                continue;
            }
            raised[j] = lo[j] + 1;
            if self.relaxation::<T>(&raised, hi)?.is_none() {
                pinned[j] = Some(lo[j]);
                any = true;
            }
            raised[j] = lo[j];
        }
        Ok(any.then_some(pinned))
    }

    /// Depth-first over boxes, the `≤ ⌊z_j⌋` branch first. The stack is
    /// explicit: near-infeasible nodes can descend far before the cap.
    fn search<T: Field>(&mut self) -> Result<(), Overflow> {
        let mut stack: Vec<(Vec<i128>, Vec<Option<i128>>)> =
            vec![(vec![0; self.n], vec![None; self.n])];
        while let Some((lo, hi)) = stack.pop() {
            if lo.iter().any(|&l| l > self.cap) || self.bounded_part_infeasible(&lo, &hi) {
                continue;
            }
            let Some((z, value)) = self.relaxation::<T>(&lo, &hi)? else {
                continue;
            };
            if let Some(pinned) = self.pin_forced::<T>(&lo, &hi)? {
                stack.push((lo, pinned));
                continue;
            }
            let base: i128 = lo.iter().sum();
            let bound = match value.floor_i128() {
                Some(f) if value.is_int() => f,
                Some(f) => f + 1,
                None => continue,
            };
            let objective = base.checked_add(bound).ok_or(Overflow)?;
            if self
                .best
                .as_ref()
                .is_some_and(|(best, _)| objective >= *best)
            {
                continue;
            }
            let Some(j) = (0..self.n).find(|&j| !z[j].is_int()) else {
                let y: Vec<i128> = z[..self.n]
                    .iter()
                    .zip(&lo)
                    .map(|(v, l)| v.floor_i128().map(|f| f + l))
                    .collect::<Option<_>>()
                    .ok_or(Overflow)?;
                self.best = Some((objective, y));
                continue;
            };
            let f = z[j].floor_i128().ok_or(Overflow)? + lo[j];
            let mut up = lo.clone();
            up[j] = f + 1;
            stack.push((up, hi.clone()));
            let mut down = hi;
            down[j] = Some(f);
            stack.push((lo, down));
        }
        Ok(())
    }
}
