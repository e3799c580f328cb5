//! Exact integer linear algebra: sparse matrices, Smith normal form with
//! unimodular transforms, integer kernels, solvability, and homology of a
//! two-step complex.
//!
//! Everything is arbitrary precision.  Elimination prefers unit pivots and
//! picks, among entries of minimal absolute value, one with a small fill
//! estimate (ties broken by (row, col) position), so all outputs are
//! deterministic.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type Int = BigInt;

pub fn int(v: i64) -> Int {
    Int::from(v)
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("composition of the boundary pair is nonzero; not a chain complex")]
    NotAComplex,
    #[error("vector does not lie in the kernel")]
    NotInKernel,
    #[error("map does not commute with the boundary pairs")]
    NotChainMap,
}

/// Sparse integer matrix, column-major.  Represents a map Z^cols -> Z^rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMat {
    rows: usize,
    cols: usize,
    data: Vec<BTreeMap<usize, Int>>,
}

impl SparseMat {
    pub fn zero(rows: usize, cols: usize) -> SparseMat {
        SparseMat { rows, cols, data: vec![BTreeMap::new(); cols] }
    }

    pub fn identity(n: usize) -> SparseMat {
        let mut m = SparseMat::zero(n, n);
        for i in 0..n {
            m.data[i].insert(i, Int::one());
        }
        m
    }

    pub fn from_triplets(
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, Int)>,
    ) -> SparseMat {
        let mut m = SparseMat::zero(rows, cols);
        for (r, c, v) in triplets {
            m.add_entry(r, c, v);
        }
        m
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> SparseMat {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = SparseMat::zero(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged dense matrix");
            for (j, &v) in row.iter().enumerate() {
                if v != 0 {
                    m.data[j].insert(i, int(v));
                }
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(|c| c.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|c| c.is_empty())
    }

    pub fn add_entry(&mut self, r: usize, c: usize, v: Int) {
        assert!(r < self.rows && c < self.cols, "entry ({}, {}) out of range", r, c);
        if v.is_zero() {
            return;
        }
        match self.data[c].entry(r) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(v);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += v;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn get(&self, r: usize, c: usize) -> Int {
        self.data[c].get(&r).cloned().unwrap_or_else(Int::zero)
    }

    pub fn col(&self, c: usize) -> impl Iterator<Item = (usize, &Int)> {
        self.data[c].iter().map(|(&r, v)| (r, v))
    }

    pub fn col_vec(&self, c: usize) -> Vec<Int> {
        let mut v = vec![Int::zero(); self.rows];
        for (r, val) in self.col(c) {
            v[r] = val.clone();
        }
        v
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Int)> {
        self.data
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |(&r, v)| (r, c, v)))
    }

    pub fn transpose(&self) -> SparseMat {
        let mut t = SparseMat::zero(self.cols, self.rows);
        for (r, c, v) in self.entries() {
            t.data[r].insert(c, v.clone());
        }
        t
    }

    pub fn mul(&self, other: &SparseMat) -> SparseMat {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut out = SparseMat::zero(self.rows, other.cols);
        for j in 0..other.cols {
            let mut acc: BTreeMap<usize, Int> = BTreeMap::new();
            for (k, bv) in other.col(j) {
                for (r, av) in self.col(k) {
                    let e = acc.entry(r).or_insert_with(Int::zero);
                    *e += av * bv;
                }
            }
            acc.retain(|_, v| !v.is_zero());
            out.data[j] = acc;
        }
        out
    }

    pub fn mul_vec(&self, v: &[Int]) -> Vec<Int> {
        assert_eq!(self.cols, v.len());
        let mut out = vec![Int::zero(); self.rows];
        for (c, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (r, a) in self.col(c) {
                out[r] += a * x;
            }
        }
        out
    }

    /// Horizontal concatenation [self | other].
    pub fn hstack(&self, other: &SparseMat) -> SparseMat {
        assert_eq!(self.rows, other.rows);
        let mut m = self.clone();
        m.cols += other.cols;
        m.data.extend(other.data.iter().cloned());
        m
    }

    pub fn from_col(v: &[Int]) -> SparseMat {
        let mut m = SparseMat::zero(v.len(), 1);
        for (r, x) in v.iter().enumerate() {
            if !x.is_zero() {
                m.data[0].insert(r, x.clone());
            }
        }
        m
    }

    /// Keeps only the listed rows, in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> SparseMat {
        let pos: BTreeMap<usize, usize> = rows.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        let mut m = SparseMat::zero(rows.len(), self.cols);
        for (r, c, v) in self.entries() {
            if let Some(&nr) = pos.get(&r) {
                m.data[c].insert(nr, v.clone());
            }
        }
        m
    }

    pub fn to_dense(&self) -> Vec<Vec<Int>> {
        let mut d = vec![vec![Int::zero(); self.cols]; self.rows];
        for (r, c, v) in self.entries() {
            d[r][c] = v.clone();
        }
        d
    }
}

/// Finitely generated abelian group: free rank plus invariant factors > 1,
/// each dividing the next.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyGroup {
    pub betti: usize,
    pub torsion: Vec<Int>,
}

impl HomologyGroup {
    pub fn free(betti: usize) -> HomologyGroup {
        HomologyGroup { betti, torsion: Vec::new() }
    }

    pub fn is_trivial(&self) -> bool {
        self.betti == 0 && self.torsion.is_empty()
    }
}

impl std::fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.betti {
            0 => {}
            1 => parts.push("Z".to_string()),
            b => parts.push(format!("Z^{}", b)),
        }
        for t in &self.torsion {
            parts.push(format!("Z/{}", t));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

// ---------------------------------------------------------------------------
// Elimination engine
// ---------------------------------------------------------------------------

/// Row-major working matrix with a column index.  Rows and columns are
/// retired as pivots are finished.
struct WorkMat {
    rows: Vec<BTreeMap<usize, Int>>,
    col_index: Vec<BTreeSet<usize>>,
    /// Positions believed to hold a unit entry; validated lazily.
    unit_candidates: BTreeSet<(usize, usize)>,
    alive_rows: BTreeSet<usize>,
    track_units: bool,
}

impl WorkMat {
    fn new(m: &SparseMat) -> WorkMat {
        Self::with_units(m, true)
    }

    fn with_units(m: &SparseMat, track_units: bool) -> WorkMat {
        let mut w = WorkMat {
            rows: vec![BTreeMap::new(); m.rows()],
            col_index: vec![BTreeSet::new(); m.cols()],
            unit_candidates: BTreeSet::new(),
            alive_rows: (0..m.rows()).collect(),
            track_units,
        };
        for (r, c, v) in m.entries() {
            w.rows[r].insert(c, v.clone());
            w.col_index[c].insert(r);
            if track_units && v.abs().is_one() {
                w.unit_candidates.insert((r, c));
            }
        }
        w
    }

    fn set(&mut self, r: usize, c: usize, v: Int) {
        if v.is_zero() {
            self.rows[r].remove(&c);
            self.col_index[c].remove(&r);
            if self.track_units {
                self.unit_candidates.remove(&(r, c));
            }
        } else {
            if self.track_units {
                if v.abs().is_one() {
                    self.unit_candidates.insert((r, c));
                } else {
                    self.unit_candidates.remove(&(r, c));
                }
            }
            self.rows[r].insert(c, v);
            self.col_index[c].insert(r);
        }
    }

    /// row_j -= q * row_i
    fn row_op(&mut self, j: usize, i: usize, q: &Int) {
        if q.is_zero() {
            return;
        }
        let src: Vec<(usize, Int)> = self.rows[i].iter().map(|(&c, v)| (c, v.clone())).collect();
        for (c, v) in src {
            let cur = self.rows[j].get(&c).cloned().unwrap_or_else(Int::zero);
            self.set(j, c, cur - q * &v);
        }
    }

    /// col_j -= q * col_i
    fn col_op(&mut self, j: usize, i: usize, q: &Int) {
        if q.is_zero() {
            return;
        }
        let rows: Vec<usize> = self.col_index[i].iter().copied().collect();
        for r in rows {
            let v = self.rows[r][&i].clone();
            let cur = self.rows[r].get(&c_key(j)).cloned().unwrap_or_else(Int::zero);
            self.set(r, j, cur - q * &v);
        }
    }

    fn remove_row(&mut self, r: usize) {
        let cols: Vec<usize> = self.rows[r].keys().copied().collect();
        for c in cols {
            self.col_index[c].remove(&r);
            if self.track_units {
                self.unit_candidates.remove(&(r, c));
            }
        }
        self.rows[r].clear();
        self.alive_rows.remove(&r);
    }

    fn remove_col(&mut self, c: usize) {
        let rows: Vec<usize> = self.col_index[c].iter().copied().collect();
        for r in rows {
            self.rows[r].remove(&c);
            if self.track_units {
                self.unit_candidates.remove(&(r, c));
            }
        }
        self.col_index[c].clear();
    }

    fn fill_cost(&self, r: usize, c: usize) -> usize {
        (self.rows[r].len() - 1) * (self.col_index[c].len() - 1)
    }

    /// Deterministic pivot choice: smallest |value|; among those, a small
    /// fill estimate; final ties by (row, col).  Unit entries are found via
    /// the candidate queue, scanning a bounded number of live ones.
    fn choose_pivot(&mut self) -> Option<(usize, usize)> {
        const SCAN: usize = 64;
        let mut stale = Vec::new();
        let mut best: Option<(usize, usize, usize)> = None; // (fill, r, c)
        let mut seen = 0usize;
        for &(r, c) in self.unit_candidates.iter() {
            match self.rows[r].get(&c) {
                Some(v) if v.abs().is_one() => {
                    let cand = (self.fill_cost(r, c), r, c);
                    if best.map_or(true, |b| cand < b) {
                        best = Some(cand);
                    }
                    seen += 1;
                    if seen >= SCAN {
                        break;
                    }
                }
                _ => stale.push((r, c)),
            }
        }
        for s in stale {
            self.unit_candidates.remove(&s);
        }
        if let Some((_, r, c)) = best {
            return Some((r, c));
        }
        // No unit entry: full scan for minimal |value|.
        let mut best: Option<(Int, usize, usize, usize)> = None; // (|v|, fill, r, c)
        for &r in &self.alive_rows {
            for (&c, v) in &self.rows[r] {
                let a = v.abs();
                let fill = self.fill_cost(r, c);
                let better = match &best {
                    None => true,
                    Some((ba, bf, br, bc)) => (&a, fill, r, c) < (ba, *bf, *br, *bc),
                };
                if better {
                    best = Some((a, fill, r, c));
                }
            }
        }
        best.map(|(_, _, r, c)| (r, c))
    }
}

// BTreeMap key helper; keeps col_op readable.
fn c_key(c: usize) -> usize {
    c
}

/// Hooks so one elimination loop can optionally track transforms.
trait OpLog {
    fn row_op(&mut self, _j: usize, _i: usize, _q: &Int) {}
    fn col_op(&mut self, _j: usize, _i: usize, _q: &Int) {}
}

struct NoLog;
impl OpLog for NoLog {}

struct TransformLog {
    u: WorkMat,
    v: WorkMat,
    uinv: WorkMat,
    vinv: WorkMat,
}

impl TransformLog {
    fn new(rows: usize, cols: usize) -> TransformLog {
        TransformLog {
            u: WorkMat::with_units(&SparseMat::identity(rows), false),
            v: WorkMat::with_units(&SparseMat::identity(cols), false),
            uinv: WorkMat::with_units(&SparseMat::identity(rows), false),
            vinv: WorkMat::with_units(&SparseMat::identity(cols), false),
        }
    }
}

impl OpLog for TransformLog {
    fn row_op(&mut self, j: usize, i: usize, q: &Int) {
        // M <- E M with E = I - q e_{ji}:  U <- E U, Uinv <- Uinv E^{-1}.
        self.u.row_op(j, i, q);
        let neg = -q.clone();
        self.uinv.col_op(i, j, &neg);
    }
    fn col_op(&mut self, j: usize, i: usize, q: &Int) {
        // M <- M E with E = I - q e_{ij}:  V <- V E, Vinv <- E^{-1} Vinv.
        self.v.col_op(j, i, q);
        let neg = -q.clone();
        self.vinv.row_op(i, j, &neg);
    }
}

fn pack(w: &WorkMat, rows: usize, cols: usize) -> SparseMat {
    let mut m = SparseMat::zero(rows, cols);
    for (r, row) in w.rows.iter().enumerate() {
        for (&c, v) in row {
            m.data[c].insert(r, v.clone());
        }
    }
    m
}

/// Clears the pivot's column (row ops) and row (column ops), letting the
/// pivot migrate to a smaller entry whenever a remainder undercuts it.
/// Returns the final pivot position, the unique nonzero of its row and
/// column.
fn clear_pivot<L: OpLog>(
    w: &mut WorkMat,
    start: (usize, usize),
    log: &mut L,
) -> (usize, usize) {
    let mut c = start.1;
    let mut r;
    loop {
        // Column phase: make column c have a single nonzero.
        loop {
            let rows: Vec<usize> = w.col_index[c].iter().copied().collect();
            debug_assert!(!rows.is_empty());
            r = rows
                .iter()
                .copied()
                .min_by(|&a, &b| {
                    (w.rows[a][&c].abs(), a).cmp(&(w.rows[b][&c].abs(), b))
                })
                .unwrap();
            if rows.len() == 1 {
                break;
            }
            let p = w.rows[r][&c].clone();
            for row in rows {
                if row == r {
                    continue;
                }
                let q = &w.rows[row][&c] / &p;
                w.row_op(row, r, &q);
                log.row_op(row, r, &q);
            }
        }
        // Row phase: make row r have a single nonzero.  While column c holds
        // only the pivot, column ops touch no other row; if the pivot
        // migrates to another column, spillover is possible and the outer
        // loop re-clears.
        loop {
            let cols: Vec<usize> = w.rows[r].keys().copied().collect();
            debug_assert!(!cols.is_empty());
            c = cols
                .iter()
                .copied()
                .min_by(|&a, &b| {
                    (w.rows[r][&a].abs(), a).cmp(&(w.rows[r][&b].abs(), b))
                })
                .unwrap();
            if cols.len() == 1 {
                break;
            }
            let p = w.rows[r][&c].clone();
            for col in cols {
                if col == c {
                    continue;
                }
                let q = &w.rows[r][&col] / &p;
                w.col_op(col, c, &q);
                log.col_op(col, c, &q);
            }
        }
        if w.col_index[c].len() == 1 {
            return (r, c);
        }
    }
}

/// Diagonalizes by unimodular row and column operations.  With
/// `want_divisibility`, each pivot is made to divide every remaining entry
/// before it is retired, so the |pivots| come out in divisibility order.
fn eliminate<L: OpLog>(
    w: &mut WorkMat,
    log: &mut L,
    want_divisibility: bool,
) -> Vec<(usize, usize, Int)> {
    let mut pivots = Vec::new();
    while let Some(start) = w.choose_pivot() {
        let (mut r, mut c) = clear_pivot(w, start, log);
        if want_divisibility {
            loop {
                let p = w.rows[r][&c].clone();
                if p.abs().is_one() {
                    break;
                }
                let mut offender = None;
                'scan: for &row in w.alive_rows.iter() {
                    if row == r {
                        continue;
                    }
                    for v in w.rows[row].values() {
                        if !(v % &p).is_zero() {
                            offender = Some(row);
                            break 'scan;
                        }
                    }
                }
                match offender {
                    None => break,
                    Some(row) => {
                        // Fold the offending row into the pivot row; the
                        // next clearing pass shrinks the pivot to a gcd.
                        let minus_one = -Int::one();
                        w.row_op(r, row, &minus_one);
                        log.row_op(r, row, &minus_one);
                        let (nr, nc) = clear_pivot(w, (r, c), log);
                        r = nr;
                        c = nc;
                    }
                }
            }
        }
        let p = w.rows[r][&c].clone();
        pivots.push((r, c, p));
        w.remove_row(r);
        w.remove_col(c);
    }
    pivots
}

/// Rank over the integers (equivalently, over the rationals).
pub fn rank(m: &SparseMat) -> usize {
    let mut w = WorkMat::new(m);
    eliminate(&mut w, &mut NoLog, false).len()
}

/// Invariant factors (positive, each dividing the next), without transforms.
pub fn snf_diagonal(m: &SparseMat) -> Vec<Int> {
    let mut w = WorkMat::new(m);
    eliminate(&mut w, &mut NoLog, true)
        .into_iter()
        .map(|(_, _, p)| p.abs())
        .collect()
}

/// Smith normal form with transforms: `u * m * v = d`, `u` and `v`
/// unimodular, `d` diagonal with positive entries in divisibility order.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: SparseMat,
    pub d: SparseMat,
    pub v: SparseMat,
    pub uinv: SparseMat,
    pub vinv: SparseMat,
    pub diagonal: Vec<Int>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.diagonal.len()
    }

    /// Invariant factors > 1.
    pub fn torsion(&self) -> Vec<Int> {
        self.diagonal.iter().filter(|d| !d.is_one()).cloned().collect()
    }
}

pub fn smith_normal_form(m: &SparseMat) -> SmithForm {
    let (rows, cols) = (m.rows(), m.cols());
    let mut w = WorkMat::new(m);
    let mut log = TransformLog::new(rows, cols);
    let pivots = eliminate(&mut w, &mut log, true);

    // Permute pivots onto the diagonal and normalize signs.
    let mut row_order: Vec<usize> = pivots.iter().map(|&(r, _, _)| r).collect();
    let mut seen_rows: BTreeSet<usize> = row_order.iter().copied().collect();
    row_order.extend((0..rows).filter(|r| !seen_rows.contains(r)));
    seen_rows.clear();
    let mut col_order: Vec<usize> = pivots.iter().map(|&(_, c, _)| c).collect();
    let seen_cols: BTreeSet<usize> = col_order.iter().copied().collect();
    col_order.extend((0..cols).filter(|c| !seen_cols.contains(c)));

    let u_raw = pack(&log.u, rows, rows);
    let uinv_raw = pack(&log.uinv, rows, rows);
    let v_raw = pack(&log.v, cols, cols);
    let vinv_raw = pack(&log.vinv, cols, cols);

    let mut u = SparseMat::zero(rows, rows);
    let mut uinv = SparseMat::zero(rows, rows);
    let mut v = SparseMat::zero(cols, cols);
    let mut vinv = SparseMat::zero(cols, cols);
    for (new_r, &old_r) in row_order.iter().enumerate() {
        let flip = new_r < pivots.len() && pivots[new_r].2.is_negative();
        for c in 0..rows {
            let val = u_raw.get(old_r, c);
            if !val.is_zero() {
                u.add_entry(new_r, c, if flip { -val } else { val });
            }
        }
        for r in 0..rows {
            let val = uinv_raw.get(r, old_r);
            if !val.is_zero() {
                uinv.add_entry(r, new_r, if flip { -val } else { val });
            }
        }
    }
    for (new_c, &old_c) in col_order.iter().enumerate() {
        for r in 0..cols {
            let val = v_raw.get(r, old_c);
            if !val.is_zero() {
                v.add_entry(r, new_c, val);
            }
        }
        for c in 0..cols {
            let val = vinv_raw.get(old_c, c);
            if !val.is_zero() {
                vinv.add_entry(new_c, c, val);
            }
        }
    }

    let diagonal: Vec<Int> = pivots.iter().map(|(_, _, p)| p.abs()).collect();
    let mut d = SparseMat::zero(rows, cols);
    for (i, p) in diagonal.iter().enumerate() {
        d.add_entry(i, i, p.clone());
    }
    SmithForm { u, d, v, uinv, vinv, diagonal }
}

// ---------------------------------------------------------------------------
// Kernels and solvability
// ---------------------------------------------------------------------------

/// Integer column echelon data for a matrix M: a lattice basis of ker M
/// together with the inverse column transform, so vectors known to lie in
/// the kernel can be written in that basis.
pub struct KernelData {
    kernel_cols: Vec<usize>,
    v: SparseMat,
    vinv: SparseMat,
}

impl KernelData {
    /// Number of kernel basis vectors.
    pub fn dim(&self) -> usize {
        self.kernel_cols.len()
    }

    /// The kernel lattice basis as columns of an n x dim matrix.
    pub fn basis(&self) -> SparseMat {
        let n = self.v.rows();
        let mut k = SparseMat::zero(n, self.kernel_cols.len());
        for (j, &c) in self.kernel_cols.iter().enumerate() {
            for (r, val) in self.v.col(c) {
                k.add_entry(r, j, val.clone());
            }
        }
        k
    }

    /// Coordinates, in the kernel basis, of columns that lie in the kernel.
    pub fn coords(&self, b: &SparseMat) -> Result<SparseMat, LinalgError> {
        let y = self.vinv.mul(b);
        let in_kernel: BTreeSet<usize> = self.kernel_cols.iter().copied().collect();
        for (r, _c, v) in y.entries() {
            if !in_kernel.contains(&r) && !v.is_zero() {
                return Err(LinalgError::NotInKernel);
            }
        }
        Ok(y.select_rows(&self.kernel_cols))
    }
}

/// Column echelon by unimodular column operations; returns the kernel data.
pub fn kernel(m: &SparseMat) -> KernelData {
    let mut w = WorkMat::new(m);
    let mut log = TransformLog::new(m.rows(), m.cols());
    let mut pivot_cols: BTreeSet<usize> = BTreeSet::new();
    for r in 0..m.rows() {
        loop {
            let active: Vec<usize> = w.rows[r]
                .keys()
                .copied()
                .filter(|c| !pivot_cols.contains(c))
                .collect();
            if active.len() <= 1 {
                if let Some(&c) = active.first() {
                    pivot_cols.insert(c);
                }
                break;
            }
            let c = active
                .iter()
                .copied()
                .min_by(|&a, &b| (w.rows[r][&a].abs(), a).cmp(&(w.rows[r][&b].abs(), b)))
                .unwrap();
            let p = w.rows[r][&c].clone();
            for col in active {
                if col == c {
                    continue;
                }
                let q = &w.rows[r][&col] / &p;
                w.col_op(col, c, &q);
                log.col_op(col, c, &q);
            }
        }
    }
    let kernel_cols: Vec<usize> = (0..m.cols()).filter(|c| !pivot_cols.contains(c)).collect();
    // Every non-pivot column must be fully zero by construction.
    debug_assert!(kernel_cols.iter().all(|&c| w.col_index[c].is_empty()));
    KernelData {
        kernel_cols,
        v: pack(&log.v, m.cols(), m.cols()),
        vinv: pack(&log.vinv, m.cols(), m.cols()),
    }
}

/// Some integral solution of `m x = b`, or None if there is none.
pub fn solve_in_image(m: &SparseMat, b: &[Int]) -> Option<Vec<Int>> {
    assert_eq!(b.len(), m.rows(), "right-hand side has wrong length");
    let sf = smith_normal_form(m);
    let ub = sf.u.mul_vec(b);
    let mut y = vec![Int::zero(); m.cols()];
    for (i, item) in ub.iter().enumerate() {
        if i < sf.diagonal.len() {
            let d = &sf.diagonal[i];
            if !(item % d).is_zero() {
                return None;
            }
            y[i] = item / d;
        } else if !item.is_zero() {
            return None;
        }
    }
    Some(sf.v.mul_vec(&y))
}

/// Whether `b` lies in the column lattice of `m`, decided by comparing
/// invariant factors of `m` and `[m | b]` (nested lattices with equal
/// invariants coincide).
pub fn is_in_image(m: &SparseMat, b: &[Int]) -> bool {
    if b.iter().all(|x| x.is_zero()) {
        return true;
    }
    let stacked = m.hstack(&SparseMat::from_col(b));
    snf_diagonal(m) == snf_diagonal(&stacked)
}

/// Whether every column of `b` lies in the column lattice of `m`.
pub fn lattice_contains(m: &SparseMat, b: &SparseMat) -> bool {
    if b.is_zero() {
        return true;
    }
    snf_diagonal(m) == snf_diagonal(&m.hstack(b))
}

// ---------------------------------------------------------------------------
// Homology
// ---------------------------------------------------------------------------

/// Homology ker(d_out) / im(d_in) of a two-step complex
/// `C_in --d_in--> C --d_out--> C_out`.
///
/// The kernel lattice of d_out is computed explicitly, d_in is rewritten in
/// that basis, and Betti number and torsion are read from the Smith form of
/// the rewritten matrix.
pub fn homology_of_pair(
    d_in: &SparseMat,
    d_out: &SparseMat,
) -> Result<HomologyGroup, LinalgError> {
    if d_out.cols() != d_in.rows() {
        return Err(LinalgError::Dimension(format!(
            "d_out acts on Z^{} but d_in lands in Z^{}",
            d_out.cols(),
            d_in.rows()
        )));
    }
    if !d_out.mul(d_in).is_zero() {
        return Err(LinalgError::NotAComplex);
    }
    if d_in.is_zero() {
        // Kernel of a map into a free group is free.
        return Ok(HomologyGroup::free(d_out.cols() - rank(d_out)));
    }
    let kd = kernel(d_out);
    let x = kd.coords(d_in)?;
    let diag = snf_diagonal(&x);
    let betti = kd.dim() - diag.len();
    let torsion = diag.into_iter().filter(|d| !d.is_one()).collect();
    Ok(HomologyGroup { betti, torsion })
}

/// A chain map's effect on homology.
#[derive(Clone, Debug)]
pub struct InducedMap {
    pub source: HomologyGroup,
    pub target: HomologyGroup,
    pub injective: bool,
    pub surjective: bool,
    /// Matrix of the map between the free parts, in Smith-adapted bases.
    /// Only present when requested.
    pub free_matrix: Option<SparseMat>,
}

impl InducedMap {
    pub fn is_isomorphism(&self) -> bool {
        self.injective && self.surjective
    }
}

/// Analyzes the map induced on homology by a degreewise chain map `f`,
/// where `src = (d_in, d_out)` and `tgt = (d_in, d_out)` are the boundary
/// pairs around the source and target slots.  Fails if `f` does not commute
/// with the boundaries (kernel into kernel, image into image).
pub fn induced_on_homology(
    f: &SparseMat,
    src: (&SparseMat, &SparseMat),
    tgt: (&SparseMat, &SparseMat),
    want_presentation: bool,
) -> Result<InducedMap, LinalgError> {
    let (src_in, src_out) = src;
    let (tgt_in, tgt_out) = tgt;
    if f.cols() != src_out.cols() || f.rows() != tgt_out.cols() {
        return Err(LinalgError::Dimension("chain map shape".into()));
    }
    if !src_out.mul(src_in).is_zero() || !tgt_out.mul(tgt_in).is_zero() {
        return Err(LinalgError::NotAComplex);
    }
    // f must send boundaries to boundaries.
    if !lattice_contains(tgt_in, &f.mul(src_in)) {
        return Err(LinalgError::NotChainMap);
    }
    let kd_s = kernel(src_out);
    let kd_t = kernel(tgt_out);
    let x_s = kd_s.coords(src_in)?;
    let x_t = kd_t.coords(tgt_in)?;
    // f must send cycles to cycles; coords errors out otherwise.
    let fk = f.mul(&kd_s.basis());
    let big_f = kd_t.coords(&fk).map_err(|_| LinalgError::NotChainMap)?;

    let group = |x: &SparseMat, dim: usize| {
        let diag = snf_diagonal(x);
        let betti = dim - diag.len();
        let torsion: Vec<Int> = diag.into_iter().filter(|d| !d.is_one()).collect();
        HomologyGroup { betti, torsion }
    };
    let source = group(&x_s, kd_s.dim());
    let target = group(&x_t, kd_t.dim());

    // Injectivity: everything mapping into im(x_t) must already lie in
    // im(x_s).  The lattice of such elements is the projection of
    // ker [F | X_t] to the F-block coordinates.
    let stacked = big_f.hstack(&x_t);
    let null = kernel(&stacked).basis();
    let proj = null.select_rows(&(0..kd_s.dim()).collect::<Vec<_>>());
    let injective = lattice_contains(&x_s, &proj);

    // Surjectivity: [F | X_t] must span Z^{dim target kernel} over Z.
    let diag = snf_diagonal(&stacked);
    let surjective = diag.len() == kd_t.dim() && diag.iter().all(|d| d.is_one());

    let free_matrix = if want_presentation {
        let sf_s = smith_normal_form(&x_s);
        let sf_t = smith_normal_form(&x_t);
        let free_rows_t: Vec<usize> = (sf_t.rank()..kd_t.dim()).collect();
        let free_cols_s: Vec<usize> = (sf_s.rank()..kd_s.dim()).collect();
        let m = sf_t.u.mul(&big_f).mul(&sf_s.uinv);
        let m = m.select_rows(&free_rows_t);
        // Select columns by transposing twice.
        let m = m.transpose().select_rows(&free_cols_s).transpose();
        Some(m)
    } else {
        None
    };

    Ok(InducedMap { source, target, injective, surjective, free_matrix })
}

// ---------------------------------------------------------------------------
// Dense routines (independent paths for tests and small problems)
// ---------------------------------------------------------------------------

/// Determinant by fraction-free (Bareiss) elimination.
pub fn determinant(m: &SparseMat) -> Int {
    assert_eq!(m.rows(), m.cols(), "determinant of a non-square matrix");
    let n = m.rows();
    if n == 0 {
        return Int::one();
    }
    let mut a = m.to_dense();
    let mut sign = false;
    let mut prev = Int::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = !sign;
                }
                None => return Int::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = num / &prev;
            }
            a[i][k] = Int::zero();
        }
        prev = a[k][k].clone();
    }
    if sign {
        -a[n - 1][n - 1].clone()
    } else {
        a[n - 1][n - 1].clone()
    }
}

/// Rank over the rationals by fraction-free elimination; an independent
/// check of the unimodular elimination used by [`rank`].
pub fn rank_fraction_free(m: &SparseMat) -> usize {
    let mut a = m.to_dense();
    let (rows, cols) = (m.rows(), m.cols());
    let mut prev = Int::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let pivot = (r..rows).find(|&i| !a[i][c].is_zero());
        let Some(p) = pivot else { continue };
        a.swap(r, p);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let num = &a[i][j] * &a[r][c] - &a[i][c] * &a[r][j];
                a[i][j] = num / &prev;
            }
            a[i][c] = Int::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::Integer;

    /// Brute-force invariant factors via gcds of k x k minors; the
    /// independent oracle for the Smith form on tiny matrices.
    fn minors_oracle(m: &SparseMat) -> Vec<Int> {
        let dense = m.to_dense();
        let (rows, cols) = (m.rows(), m.cols());
        let n = rows.min(cols);
        let mut gcds = vec![Int::zero(); n + 1];
        gcds[0] = Int::one();
        for k in 1..=n {
            let mut g = Int::zero();
            for rsel in combinations(rows, k) {
                for csel in combinations(cols, k) {
                    let sub: Vec<Vec<Int>> = rsel
                        .iter()
                        .map(|&r| csel.iter().map(|&c| dense[r][c].clone()).collect())
                        .collect();
                    let d = dense_det(&sub);
                    g = g.gcd(&d);
                }
            }
            gcds[k] = g;
        }
        let mut out = Vec::new();
        for k in 1..=n {
            if gcds[k].is_zero() {
                break;
            }
            out.push(&gcds[k] / &gcds[k - 1]);
        }
        out
    }

    fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == k {
                out.push(cur.clone());
                return;
            }
            for i in start..n {
                cur.push(i);
                rec(i + 1, n, k, cur, out);
                cur.pop();
            }
        }
        rec(0, n, k, &mut cur, &mut out);
        out
    }

    fn dense_det(a: &[Vec<Int>]) -> Int {
        let n = a.len();
        if n == 0 {
            return Int::one();
        }
        if n == 1 {
            return a[0][0].clone();
        }
        let mut det = Int::zero();
        for j in 0..n {
            if a[0][j].is_zero() {
                continue;
            }
            let minor: Vec<Vec<Int>> = (1..n)
                .map(|i| {
                    (0..n).filter(|&c| c != j).map(|c| a[i][c].clone()).collect()
                })
                .collect();
            let term = &a[0][j] * dense_det(&minor);
            if j % 2 == 0 {
                det += term;
            } else {
                det -= term;
            }
        }
        det
    }

    fn check_smith(m: &SparseMat) {
        let sf = smith_normal_form(m);
        assert_eq!(sf.u.mul(m).mul(&sf.v), sf.d, "U M V != D");
        assert_eq!(sf.u.mul(&sf.uinv), SparseMat::identity(m.rows()));
        assert_eq!(sf.vinv.mul(&sf.v), SparseMat::identity(m.cols()));
        for pair in sf.diagonal.windows(2) {
            assert!((&pair[1] % &pair[0]).is_zero(), "divisibility chain broken");
        }
        for d in &sf.diagonal {
            assert!(d.is_positive());
        }
        if m.rows() <= 12 {
            assert!(determinant(&sf.u).abs().is_one(), "U not unimodular");
        }
        if m.cols() <= 12 {
            assert!(determinant(&sf.v).abs().is_one(), "V not unimodular");
        }
    }

    #[test]
    fn snf_frozen_example() {
        // d1 = gcd of entries = 2, d1*d2 = |det| = 8, so D = diag(2, 4);
        // frozen from the minors oracle.
        let m = SparseMat::from_dense(&[vec![2, 4], vec![6, 8]]);
        assert_eq!(minors_oracle(&m), vec![int(2), int(4)]);
        assert_eq!(snf_diagonal(&m), vec![int(2), int(4)]);
        check_smith(&m);
    }

    #[test]
    fn snf_zero_and_identity() {
        let z = SparseMat::zero(3, 2);
        assert!(snf_diagonal(&z).is_empty());
        let sf = smith_normal_form(&z);
        assert!(sf.d.is_zero());
        check_smith(&z);

        let i = SparseMat::identity(4);
        assert_eq!(snf_diagonal(&i), vec![Int::one(); 4]);
        check_smith(&i);
    }

    #[test]
    fn snf_matches_minors_oracle() {
        let cases = vec![
            vec![vec![0, 0], vec![0, 0]],
            vec![vec![2, 0], vec![0, 3]],
            vec![vec![6, 4], vec![4, 6]],
            vec![vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 9]],
            vec![vec![-6, 111, -36], vec![5, -672, 210], vec![0, -255, 81]],
            vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, 4, 16]],
        ];
        for rows in cases {
            let m = SparseMat::from_dense(&rows);
            assert_eq!(snf_diagonal(&m), minors_oracle(&m), "matrix {:?}", rows);
            check_smith(&m);
        }
    }

    #[test]
    fn rank_paths_agree() {
        let m = SparseMat::from_dense(&[
            vec![1, 2, 3, 1],
            vec![2, 4, 6, 2],
            vec![0, 1, 1, 0],
        ]);
        assert_eq!(rank(&m), 2);
        assert_eq!(rank_fraction_free(&m), 2);
    }

    #[test]
    fn kernel_lattice() {
        // ker [[1, 2, 3]] is rank 2 and saturated.
        let m = SparseMat::from_dense(&[vec![1, 2, 3]]);
        let kd = kernel(&m);
        assert_eq!(kd.dim(), 2);
        let k = kd.basis();
        assert!(m.mul(&k).is_zero());
        // Saturation: invariant factors of the basis are all 1.
        assert!(snf_diagonal(&k).iter().all(|d| d.is_one()));
    }

    #[test]
    fn solve_examples() {
        let m = SparseMat::from_dense(&[vec![2]]);
        assert_eq!(solve_in_image(&m, &[int(4)]), Some(vec![int(2)]));
        assert_eq!(solve_in_image(&m, &[int(3)]), None);
        assert!(is_in_image(&m, &[int(4)]));
        assert!(!is_in_image(&m, &[int(3)]));
    }

    #[test]
    fn homology_examples() {
        // Circle: one vertex, one edge, zero differentials.
        let d_out = SparseMat::zero(1, 1);
        let d_in = SparseMat::zero(1, 0);
        let h1 = homology_of_pair(&d_in, &d_out).unwrap();
        assert_eq!(h1, HomologyGroup::free(1));

        // Z/2 from d_in = [2] into the kernel of the zero map.
        let d_in = SparseMat::from_dense(&[vec![2]]);
        let d_out = SparseMat::zero(0, 1);
        let h = homology_of_pair(&d_in, &d_out).unwrap();
        assert_eq!(h.betti, 0);
        assert_eq!(h.torsion, vec![int(2)]);

        // Zero maps on a rank-n middle term.
        let h = homology_of_pair(&SparseMat::zero(5, 2), &SparseMat::zero(3, 5)).unwrap();
        assert_eq!(h, HomologyGroup::free(5));

        // Broken complex rejected.
        let d_in = SparseMat::from_dense(&[vec![1]]);
        let d_out = SparseMat::from_dense(&[vec![1]]);
        assert_eq!(homology_of_pair(&d_in, &d_out), Err(LinalgError::NotAComplex));
    }

    #[test]
    fn induced_identity_is_iso() {
        let d_in = SparseMat::from_dense(&[vec![2, 0], vec![0, 0], vec![0, 3]]);
        let d_out = SparseMat::zero(0, 3);
        let f = SparseMat::identity(3);
        let ind =
            induced_on_homology(&f, (&d_in, &d_out), (&d_in, &d_out), true).unwrap();
        assert!(ind.injective && ind.surjective && ind.is_isomorphism());
        assert_eq!(ind.source, ind.target);
        let fm = ind.free_matrix.unwrap();
        assert_eq!(fm.rows(), ind.target.betti);
        assert_eq!(fm.cols(), ind.source.betti);
    }

    #[test]
    fn induced_detects_non_injective() {
        // Source H = Z (no relations), target H = Z, f = multiplication by 0.
        let zero_in = SparseMat::zero(1, 0);
        let zero_out = SparseMat::zero(0, 1);
        let f = SparseMat::from_dense(&[vec![0]]);
        let ind = induced_on_homology(&f, (&zero_in, &zero_out), (&zero_in, &zero_out), false)
            .unwrap();
        assert!(!ind.injective);
        assert!(!ind.surjective);

        // Multiplication by 2 is injective but not surjective on Z.
        let f = SparseMat::from_dense(&[vec![2]]);
        let ind = induced_on_homology(&f, (&zero_in, &zero_out), (&zero_in, &zero_out), false)
            .unwrap();
        assert!(ind.injective);
        assert!(!ind.surjective);
    }

    #[test]
    fn induced_mod_torsion() {
        // Source H = Z/2, target H = Z/4, map x -> 2x is injective.
        let src_in = SparseMat::from_dense(&[vec![2]]);
        let tgt_in = SparseMat::from_dense(&[vec![4]]);
        let zero_out = SparseMat::zero(0, 1);
        let f = SparseMat::from_dense(&[vec![2]]);
        let ind =
            induced_on_homology(&f, (&src_in, &zero_out), (&tgt_in, &zero_out), false).unwrap();
        assert!(ind.injective);
        assert!(!ind.surjective);

        // x -> x is NOT well-defined Z/2 -> Z/4 (fails the chain-map test).
        let f = SparseMat::identity(1);
        assert_eq!(
            induced_on_homology(&f, (&src_in, &zero_out), (&tgt_in, &zero_out), false)
                .unwrap_err(),
            LinalgError::NotChainMap
        );
    }

    #[test]
    fn determinant_bareiss() {
        let m = SparseMat::from_dense(&[vec![2, 0, 1], vec![1, 3, 2], vec![1, 1, 1]]);
        assert_eq!(determinant(&m), int(2 * (3 - 2) - 0 + (1 - 3)));
        let singular = SparseMat::from_dense(&[vec![1, 2], vec![2, 4]]);
        assert_eq!(determinant(&singular), Int::zero());
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(64))]

        #[test]
        fn prop_snf_certificates(rows in 1usize..5, cols in 1usize..5, seed in 0u64..10_000) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let dense: Vec<Vec<i64>> = (0..rows)
                .map(|_| (0..cols).map(|_| rng.gen_range(-9i64..=9)).collect())
                .collect();
            let m = SparseMat::from_dense(&dense);
            check_smith(&m);
            proptest::prop_assert_eq!(snf_diagonal(&m), minors_oracle(&m));
            proptest::prop_assert_eq!(rank(&m), rank_fraction_free(&m));
        }

        #[test]
        fn prop_solve_round_trip(rows in 1usize..5, cols in 1usize..5, seed in 0u64..10_000) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let dense: Vec<Vec<i64>> = (0..rows)
                .map(|_| (0..cols).map(|_| rng.gen_range(-9i64..=9)).collect())
                .collect();
            let m = SparseMat::from_dense(&dense);
            let x: Vec<Int> = (0..cols).map(|_| int(rng.gen_range(-9i64..=9))).collect();
            let b = m.mul_vec(&x);
            let sol = solve_in_image(&m, &b).expect("m x = m x must be solvable");
            proptest::prop_assert_eq!(m.mul_vec(&sol), b.clone());
            proptest::prop_assert!(is_in_image(&m, &b));
        }
    }
}
