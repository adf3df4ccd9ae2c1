//! Choice outcomes, covariate blocks, datasets and parameter vectors.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One of the four outcomes `(d1, d2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ChoiceOutcome {
    /// Whether the first alternative is purchased.
    pub d1: bool,
    /// Whether the second alternative is purchased.
    pub d2: bool,
}

impl ChoiceOutcome {
    /// Outside option `(0,0)`.
    pub const NONE: Self = Self { d1: false, d2: false };
    /// First alternative alone, `(1,0)`.
    pub const FIRST: Self = Self { d1: true, d2: false };
    /// Second alternative alone, `(0,1)`.
    pub const SECOND: Self = Self { d1: false, d2: true };
    /// The bundle `(1,1)`.
    pub const BUNDLE: Self = Self { d1: true, d2: true };
    /// All outcomes in the order `(0,0), (1,0), (0,1), (1,1)`.
    pub const ALL: [Self; 4] = [Self::NONE, Self::FIRST, Self::SECOND, Self::BUNDLE];

    /// Builds an outcome from two 0/1 integers.
    pub fn from_bits(d1: u8, d2: u8) -> Result<Self> {
        if d1 > 1 || d2 > 1 {
            return Err(Error::input(format!("choice indicators must be 0 or 1, got ({d1},{d2})")));
        }
        Ok(Self { d1: d1 == 1, d2: d2 == 1 })
    }

    /// Position in [`ChoiceOutcome::ALL`].
    #[inline]
    pub fn index(self) -> usize {
        self.d1 as usize + 2 * self.d2 as usize
    }

    /// Inverse of [`ChoiceOutcome::index`].
    pub fn from_index(i: usize) -> Self {
        Self::ALL[i & 3]
    }

    /// `1[self == d]` as a float.
    #[inline]
    pub fn indicator(self, d: ChoiceOutcome) -> f64 {
        if self == d {
            1.0
        } else {
            0.0
        }
    }

    /// `(-1)^{d1}`.
    #[inline]
    pub fn sign1(self) -> f64 {
        if self.d1 {
            -1.0
        } else {
            1.0
        }
    }

    /// `(-1)^{d2}`.
    #[inline]
    pub fn sign2(self) -> f64 {
        if self.d2 {
            -1.0
        } else {
            1.0
        }
    }
}

impl fmt::Display for ChoiceOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.d1 as u8, self.d2 as u8)
    }
}

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Block {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Block {
    /// Wraps row-major data.
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::input(format!("block of {rows}x{cols} needs {} values, got {}", rows * cols, data.len())));
        }
        Ok(Self { rows, cols, data })
    }

    /// A block of zeros.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: alloc::vec![0.0; rows * cols] }
    }

    /// Builds a block from row slices, all of length `cols`.
    pub fn from_rows<R: AsRef<[f64]>>(cols: usize, rows: &[R]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::input(format!("row of length {} in a block with {cols} columns", r.len())));
            }
            data.extend_from_slice(r);
        }
        Ok(Self { rows: rows.len(), cols, data })
    }

    /// Number of rows.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Number of columns.
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Row `i`.
    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Mutable row `i`.
    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Element `(i, j)`.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    /// Copy of column `j`.
    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    /// The raw row-major storage.
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// New block made of the given rows, in order (rows may repeat).
    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend_from_slice(self.row(i));
        }
        Self { rows: idx.len(), cols: self.cols, data }
    }

    /// Element-wise difference `self - other`.
    pub fn sub(&self, other: &Block) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::input("block shapes differ"));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(Self { rows: self.rows, cols: self.cols, data })
    }

    /// Row-wise inner products with `coef`.
    pub fn dot_rows(&self, coef: &[f64]) -> Vec<f64> {
        (0..self.rows).map(|i| dot(self.row(i), coef)).collect()
    }
}

/// Inner product of two equally long slices.
#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Per-column discreteness flags. `x` applies to both `X1` and `X2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnKinds {
    /// Discrete flags for the columns of `X1` and `X2`.
    pub x: Vec<bool>,
    /// Discrete flags for the columns of `W`.
    pub w: Vec<bool>,
    /// Discrete flags for the columns of `S`.
    pub s: Vec<bool>,
}

impl ColumnKinds {
    /// All columns continuous.
    pub fn continuous(k1: usize, k2: usize, k3: usize) -> Self {
        Self { x: alloc::vec![false; k1], w: alloc::vec![false; k2], s: alloc::vec![false; k3] }
    }

    /// Flags in feature order `[X1, X2, W, S]`.
    pub fn feature_mask(&self) -> Vec<bool> {
        let mut m = self.x.clone();
        m.extend_from_slice(&self.x);
        m.extend_from_slice(&self.w);
        m.extend_from_slice(&self.s);
        m
    }
}

/// Observed covariates `X1`, `X2` (N x k1), `W` (N x k2) and `S` (N x k3).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Covariates {
    /// Regressors of the first alternative.
    pub x1: Block,
    /// Regressors of the second alternative.
    pub x2: Block,
    /// Regressors of the bundle interaction.
    pub w: Block,
    /// Common regressors (may have zero columns).
    pub s: Block,
}

/// Borrowed view of one observation's covariates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CovariateRow<'a> {
    /// `X1` row.
    pub x1: &'a [f64],
    /// `X2` row.
    pub x2: &'a [f64],
    /// `W` row.
    pub w: &'a [f64],
    /// `S` row.
    pub s: &'a [f64],
}

impl CovariateRow<'_> {
    /// Concatenation `[x1, x2, w, s]`.
    pub fn features(&self) -> Vec<f64> {
        let mut f = Vec::with_capacity(self.x1.len() * 2 + self.w.len() + self.s.len());
        f.extend_from_slice(self.x1);
        f.extend_from_slice(self.x2);
        f.extend_from_slice(self.w);
        f.extend_from_slice(self.s);
        f
    }
}

impl Covariates {
    /// Checks that the blocks are conformable.
    pub fn new(x1: Block, x2: Block, w: Block, s: Block) -> Result<Self> {
        let n = x1.rows();
        if x2.rows() != n || w.rows() != n || s.rows() != n {
            return Err(Error::input("covariate blocks have different row counts"));
        }
        if x1.cols() != x2.cols() {
            return Err(Error::input("X1 and X2 must have the same number of columns"));
        }
        if x1.cols() == 0 || w.cols() == 0 {
            return Err(Error::input("X and W need at least one column each"));
        }
        Ok(Self { x1, x2, w, s })
    }

    /// Number of rows.
    pub fn n(&self) -> usize {
        self.x1.rows()
    }

    /// Columns of `X1`/`X2`.
    pub fn k1(&self) -> usize {
        self.x1.cols()
    }

    /// Columns of `W`.
    pub fn k2(&self) -> usize {
        self.w.cols()
    }

    /// Columns of `S`.
    pub fn k3(&self) -> usize {
        self.s.cols()
    }

    /// Borrowed row `i`.
    #[inline]
    pub fn row(&self, i: usize) -> CovariateRow<'_> {
        CovariateRow { x1: self.x1.row(i), x2: self.x2.row(i), w: self.w.row(i), s: self.s.row(i) }
    }

    /// Rows `idx`, in order.
    pub fn select_rows(&self, idx: &[usize]) -> Self {
        Self {
            x1: self.x1.select_rows(idx),
            x2: self.x2.select_rows(idx),
            w: self.w.select_rows(idx),
            s: self.s.select_rows(idx),
        }
    }

    /// Element-wise difference of two conformable covariate sets.
    pub fn sub(&self, other: &Covariates) -> Result<Self> {
        Ok(Self {
            x1: self.x1.sub(&other.x1)?,
            x2: self.x2.sub(&other.x2)?,
            w: self.w.sub(&other.w)?,
            s: self.s.sub(&other.s)?,
        })
    }

    fn check(&self, kinds: &ColumnKinds) -> Result<()> {
        if kinds.x.len() != self.k1() || kinds.w.len() != self.k2() || kinds.s.len() != self.k3() {
            return Err(Error::input("column kinds do not match the covariate blocks"));
        }
        let blocks: [(&str, &Block, &[bool]); 4] =
            [("x1", &self.x1, &kinds.x), ("x2", &self.x2, &kinds.x), ("w", &self.w, &kinds.w), ("s", &self.s, &kinds.s)];
        for (name, b, disc) in blocks {
            for i in 0..b.rows() {
                for (j, &v) in b.row(i).iter().enumerate() {
                    if !v.is_finite() {
                        return Err(Error::input(format!("non-finite value in {name} row {i} column {}", j + 1)));
                    }
                    if disc[j] && libm::trunc(v) != v {
                        return Err(Error::input(format!(
                            "discrete column {name}_{} has non-integer value {v} in row {i}",
                            j + 1
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    fn cmp_rows(&self, i: usize, m: usize) -> Ordering {
        let a = self.row(i);
        let b = self.row(m);
        let pairs = [(a.x1, b.x1), (a.x2, b.x2), (a.w, b.w), (a.s, b.s)];
        for (ra, rb) in pairs {
            for (x, y) in ra.iter().zip(rb.iter()) {
                match x.total_cmp(y) {
                    Ordering::Equal => {}
                    o => return o,
                }
            }
        }
        Ordering::Equal
    }
}

/// Cross-sectional sample.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrossSectionDataset {
    /// Covariates.
    pub covariates: Covariates,
    /// Discreteness flags per column.
    pub kinds: ColumnKinds,
    /// Observed outcome per row.
    pub choices: Vec<ChoiceOutcome>,
}

impl CrossSectionDataset {
    /// Validates shapes, finiteness and integrality of discrete columns.
    pub fn new(covariates: Covariates, kinds: ColumnKinds, choices: Vec<ChoiceOutcome>) -> Result<Self> {
        if choices.len() != covariates.n() {
            return Err(Error::input(format!("{} choices for {} rows", choices.len(), covariates.n())));
        }
        covariates.check(&kinds)?;
        Ok(Self { covariates, kinds, choices })
    }

    /// Number of observations.
    pub fn len(&self) -> usize {
        self.choices.len()
    }

    /// True when there are no observations.
    pub fn is_empty(&self) -> bool {
        self.choices.is_empty()
    }

    /// Bootstrap-style resample: the rows `idx` in order.
    pub fn resample(&self, idx: &[usize]) -> Self {
        Self {
            covariates: self.covariates.select_rows(idx),
            kinds: self.kinds.clone(),
            choices: idx.iter().map(|&i| self.choices[i]).collect(),
        }
    }

    /// Row order that sorts observations by their values. Estimators work
    /// on the sorted copy so results do not depend on the input order.
    pub fn canonical_order(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.len()).collect();
        idx.sort_by(|&a, &b| self.covariates.cmp_rows(a, b).then(self.choices[a].cmp(&self.choices[b])));
        idx
    }

    /// Copy sorted into canonical order.
    pub fn canonicalized(&self) -> Self {
        self.resample(&self.canonical_order())
    }
}

/// Covariates and choices of all agents in one period.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PanelPeriod {
    /// Covariates in this period.
    pub covariates: Covariates,
    /// Choices in this period.
    pub choices: Vec<ChoiceOutcome>,
}

/// Balanced panel: every agent observed in every period.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PanelDataset {
    /// One entry per period, agents in the same order in each.
    pub periods: Vec<PanelPeriod>,
    /// Discreteness flags per column.
    pub kinds: ColumnKinds,
}

impl PanelDataset {
    /// Validates balance, shapes, finiteness and integrality.
    pub fn new(periods: Vec<PanelPeriod>, kinds: ColumnKinds) -> Result<Self> {
        if periods.len() < 2 {
            return Err(Error::input("a panel needs at least two periods"));
        }
        let n = periods[0].covariates.n();
        let (k1, k2, k3) = (periods[0].covariates.k1(), periods[0].covariates.k2(), periods[0].covariates.k3());
        for (t, p) in periods.iter().enumerate() {
            let c = &p.covariates;
            if c.n() != n || p.choices.len() != n {
                return Err(Error::input(format!("period {} is unbalanced", t + 1)));
            }
            if c.k1() != k1 || c.k2() != k2 || c.k3() != k3 {
                return Err(Error::input(format!("period {} has different block widths", t + 1)));
            }
            c.check(&kinds)?;
        }
        Ok(Self { periods, kinds })
    }

    /// Number of agents.
    pub fn n(&self) -> usize {
        self.periods[0].choices.len()
    }

    /// Number of periods.
    pub fn t_periods(&self) -> usize {
        self.periods.len()
    }

    /// Agents `idx`, in order.
    pub fn resample(&self, idx: &[usize]) -> Self {
        let periods = self
            .periods
            .iter()
            .map(|p| PanelPeriod {
                covariates: p.covariates.select_rows(idx),
                choices: idx.iter().map(|&i| p.choices[i]).collect(),
            })
            .collect();
        Self { periods, kinds: self.kinds.clone() }
    }

    /// Agent order sorting by all periods' values.
    pub fn canonical_order(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.n()).collect();
        idx.sort_by(|&a, &b| {
            for p in &self.periods {
                let o = p.covariates.cmp_rows(a, b).then(p.choices[a].cmp(&p.choices[b]));
                if o != Ordering::Equal {
                    return o;
                }
            }
            Ordering::Equal
        });
        idx
    }

    /// Copy sorted into canonical agent order.
    pub fn canonicalized(&self) -> Self {
        self.resample(&self.canonical_order())
    }

    /// Number of agents whose choice differs between some two periods.
    pub fn switchers(&self) -> usize {
        (0..self.n()).filter(|&i| self.periods.iter().any(|p| p.choices[i] != self.periods[0].choices[i])).count()
    }
}

/// Coefficients `(beta, gamma, rho1, rho2, rho_b)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamVector {
    /// Coefficients on `X1` and `X2` (first entry normalized to 1).
    pub beta: Vec<f64>,
    /// Coefficients on `W` (first entry normalized to 1).
    pub gamma: Vec<f64>,
    /// Coefficients on `S` in the first stand-alone utility.
    pub rho1: Vec<f64>,
    /// Coefficients on `S` in the second stand-alone utility.
    pub rho2: Vec<f64>,
    /// Coefficients on `S` in the bundle interaction.
    pub rho_b: Vec<f64>,
}

impl ParamVector {
    /// True when the first entries of `beta` and `gamma` equal one.
    pub fn is_normalized(&self) -> bool {
        self.beta.first() == Some(&1.0) && self.gamma.first() == Some(&1.0)
    }

    /// Checks normalization and block lengths against `(k1, k2, k3)`.
    pub fn validate(&self, k1: usize, k2: usize, k3: usize) -> Result<()> {
        if self.beta.len() != k1 || self.gamma.len() != k2 {
            return Err(Error::input("parameter blocks do not match the covariate widths"));
        }
        if self.rho1.len() != k3 || self.rho2.len() != k3 || self.rho_b.len() != k3 {
            return Err(Error::input("rho blocks must have one entry per common regressor"));
        }
        if !self.is_normalized() {
            return Err(Error::input("first coefficients of beta and gamma must equal 1"));
        }
        Ok(())
    }

    /// Index `X1'beta + S'rho1`.
    #[inline]
    pub fn index1(&self, row: &CovariateRow<'_>) -> f64 {
        dot(row.x1, &self.beta) + dot(row.s, &self.rho1)
    }

    /// Index `X2'beta + S'rho2`.
    #[inline]
    pub fn index2(&self, row: &CovariateRow<'_>) -> f64 {
        dot(row.x2, &self.beta) + dot(row.s, &self.rho2)
    }

    /// Index `W'gamma + S'rho_b`.
    #[inline]
    pub fn index_b(&self, row: &CovariateRow<'_>) -> f64 {
        dot(row.w, &self.gamma) + dot(row.s, &self.rho_b)
    }
}

/// Which coefficients are free in an estimation and how they are packed
/// into the optimizer's vector: free entries of `beta`, free entries of
/// `gamma`, then `rho1`, `rho2` and `rho_b` when estimated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamLayout {
    /// Columns of `X1`/`X2`.
    pub k1: usize,
    /// Columns of `W`.
    pub k2: usize,
    /// Columns of `S`.
    pub k3: usize,
    /// Whether `rho1` and `rho2` are estimated.
    pub estimate_rho: bool,
    /// Whether `rho_b` is estimated (otherwise pinned at zero).
    pub estimate_rho_b: bool,
}

impl ParamLayout {
    /// Number of free coordinates.
    pub fn dim(&self) -> usize {
        let rho = if self.estimate_rho { 2 * self.k3 } else { 0 };
        let rb = if self.estimate_rho_b { self.k3 } else { 0 };
        (self.k1 - 1) + (self.k2 - 1) + rho + rb
    }

    /// Free coordinates of `p`.
    pub fn pack(&self, p: &ParamVector) -> Vec<f64> {
        let mut v = Vec::with_capacity(self.dim());
        v.extend_from_slice(&p.beta[1..]);
        v.extend_from_slice(&p.gamma[1..]);
        if self.estimate_rho {
            v.extend_from_slice(&p.rho1);
            v.extend_from_slice(&p.rho2);
        }
        if self.estimate_rho_b {
            v.extend_from_slice(&p.rho_b);
        }
        v
    }

    /// Full parameter vector from free coordinates.
    pub fn unpack(&self, free: &[f64]) -> ParamVector {
        let mut it = free.iter().copied();
        let mut take = |k: usize| -> Vec<f64> { (0..k).map(|_| it.next().unwrap_or(0.0)).collect() };
        let mut beta = alloc::vec![1.0];
        beta.extend(take(self.k1 - 1));
        let mut gamma = alloc::vec![1.0];
        gamma.extend(take(self.k2 - 1));
        let (rho1, rho2) = if self.estimate_rho {
            (take(self.k3), take(self.k3))
        } else {
            (alloc::vec![0.0; self.k3], alloc::vec![0.0; self.k3])
        };
        let rho_b = if self.estimate_rho_b { take(self.k3) } else { alloc::vec![0.0; self.k3] };
        ParamVector { beta, gamma, rho1, rho2, rho_b }
    }

    /// Names of the free coordinates, e.g. `beta_2`, `rho1_1`.
    pub fn names(&self) -> Vec<String> {
        let mut v = Vec::new();
        v.extend((2..=self.k1).map(|j| format!("beta_{j}")));
        v.extend((2..=self.k2).map(|j| format!("gamma_{j}")));
        if self.estimate_rho {
            v.extend((1..=self.k3).map(|j| format!("rho1_{j}")));
            v.extend((1..=self.k3).map(|j| format!("rho2_{j}")));
        }
        if self.estimate_rho_b {
            v.extend((1..=self.k3).map(|j| format!("rho_b_{j}")));
        }
        v
    }
}
