use num_complex::Complex64;

use super::{act_fermion, act_majorana, act_pauli, basis_parity, check_sites, EdObservable};
use crate::error::Result;
use crate::jw::{FermionMonomial, MajoranaMonomial, Parity, PauliString};
use crate::quasifree::QuadraticHamiltonian;

#[derive(Debug, Clone, PartialEq)]
pub enum EdTerm {
    Fermion(FermionMonomial),
    Majorana(MajoranaMonomial),
    Pauli(PauliString),
}

impl EdTerm {
    pub(crate) fn act(&self, sites: usize, b: usize) -> Result<Option<(Complex64, usize)>> {
        match self {
            EdTerm::Fermion(m) => act_fermion(m, sites, b),
            EdTerm::Majorana(m) => act_majorana(m, sites, b).map(Some),
            EdTerm::Pauli(p) => act_pauli(p, sites, b).map(Some),
        }
    }
}

/// Sparse `2^L x 2^L` operator in compressed-row form.
#[derive(Debug, Clone)]
pub struct EdOperator {
    sites: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<Complex64>,
    parity: Option<Parity>,
    hermitian: bool,
}

impl EdOperator {
    /// Assembles `sum_t t` from basis-state actions.
    pub fn from_terms<O: EdObservable + ?Sized>(sites: usize, op: &O) -> Result<Self> {
        check_sites(sites)?;
        let dim = 1usize << sites;
        let terms = op.terms();
        // column-wise actions, transposed into rows afterwards
        let mut triplets: Vec<(usize, usize, Complex64)> = Vec::new();
        for b in 0..dim {
            for t in &terms {
                if let Some((a, s)) = t.act(sites, b)? {
                    if a != Complex64::new(0.0, 0.0) {
                        triplets.push((s, b, a));
                    }
                }
            }
        }
        triplets.sort_by_key(|x| (x.0, x.1));
        let mut row_ptr = vec![0usize; dim + 1];
        let mut cols = Vec::with_capacity(triplets.len());
        let mut vals: Vec<Complex64> = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in triplets {
            if last == Some((r, c)) {
                *vals.last_mut().unwrap() += v;
            } else {
                cols.push(c);
                vals.push(v);
                row_ptr[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for r in 0..dim {
            row_ptr[r + 1] += row_ptr[r];
        }
        let mut op = Self {
            sites,
            row_ptr,
            cols,
            vals,
            parity: None,
            hermitian: false,
        };
        op.prune();
        op.parity = op.detect_parity();
        op.hermitian = op.hermiticity_violation() <= 1e-12;
        Ok(op)
    }

    /// Fermion-side assembly of `sum A_ij (2 c^dag_i c_j - delta_ij) + sum (B_ij c^dag_i c^dag_j + h.c.)`.
    pub fn from_hamiltonian(h: &QuadraticHamiltonian) -> Result<Self> {
        let n = h.sites();
        check_sites(n)?;
        Self::from_terms(n, &hamiltonian_terms(h))
    }

    pub fn from_pauli(sites: usize, terms: &[PauliString]) -> Result<Self> {
        Self::from_terms(sites, terms)
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn dim(&self) -> usize {
        1 << self.sites
    }

    pub fn parity(&self) -> Option<Parity> {
        self.parity
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn is_real(&self) -> bool {
        self.vals.iter().all(|v| v.im == 0.0)
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        let range = self.row_ptr[r]..self.row_ptr[r + 1];
        self.cols[range.clone()].iter().cloned().zip(self.vals[range].iter().cloned())
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        let range = self.row_ptr[r]..self.row_ptr[r + 1];
        match self.cols[range.clone()].binary_search(&c) {
            Ok(k) => self.vals[range.start + k],
            Err(_) => Complex64::new(0.0, 0.0),
        }
    }

    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        (0..self.dim())
            .map(|r| self.row(r).map(|(c, v)| v * x[c]).sum())
            .collect()
    }

    /// Exact structural equality: same sparsity pattern and identical values.
    pub fn exactly_equal(&self, other: &EdOperator) -> bool {
        self.sites == other.sites && self.row_ptr == other.row_ptr && self.cols == other.cols && self.vals == other.vals
    }

    pub fn max_abs_diff(&self, other: &EdOperator) -> f64 {
        let mut d = 0.0f64;
        for r in 0..self.dim() {
            for (c, v) in self.row(r) {
                d = d.max((v - other.get(r, c)).norm());
            }
            for (c, v) in other.row(r) {
                d = d.max((v - self.get(r, c)).norm());
            }
        }
        d
    }

    /// True when the operator commutes with total parity (`[H, P] = 0`).
    pub fn conserves_parity(&self) -> bool {
        self.parity == Some(Parity::Even) || self.nnz() == 0
    }

    fn prune(&mut self) {
        let dim = self.dim();
        let mut row_ptr = vec![0usize; dim + 1];
        let mut cols = Vec::with_capacity(self.cols.len());
        let mut vals = Vec::with_capacity(self.vals.len());
        for r in 0..dim {
            for (c, v) in self.row(r) {
                if v != Complex64::new(0.0, 0.0) {
                    cols.push(c);
                    vals.push(v);
                }
            }
            row_ptr[r + 1] = cols.len();
        }
        self.row_ptr = row_ptr;
        self.cols = cols;
        self.vals = vals;
    }

    fn detect_parity(&self) -> Option<Parity> {
        let mut even = true;
        let mut odd = true;
        for r in 0..self.dim() {
            for (c, _) in self.row(r) {
                if basis_parity(r) == basis_parity(c) {
                    odd = false;
                } else {
                    even = false;
                }
            }
        }
        match (even, odd) {
            (true, _) => Some(Parity::Even),
            (false, true) => Some(Parity::Odd),
            _ => None,
        }
    }

    fn hermiticity_violation(&self) -> f64 {
        let mut d = 0.0f64;
        for r in 0..self.dim() {
            for (c, v) in self.row(r) {
                d = d.max((v - self.get(c, r).conj()).norm());
            }
        }
        d
    }
}

/// Monomial expansion of a quadratic Hamiltonian.
pub(crate) fn hamiltonian_terms(h: &QuadraticHamiltonian) -> Vec<FermionMonomial> {
    let n = h.sites() as i64;
    let (a, b) = (h.hopping(), h.pairing());
    let mut terms = Vec::new();
    let zero = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            let (iu, ju) = (i as usize, j as usize);
            let aij = a[(iu, ju)];
            if aij != zero {
                terms.push((&FermionMonomial::cdag(i) * &FermionMonomial::c(j)).with_coeff(2.0 * aij));
                if i == j {
                    terms.push(FermionMonomial::identity().with_coeff(-aij));
                }
            }
            let bij = b[(iu, ju)];
            if bij != zero {
                terms.push((&FermionMonomial::cdag(i) * &FermionMonomial::cdag(j)).with_coeff(bij));
                terms.push((&FermionMonomial::c(j) * &FermionMonomial::c(i)).with_coeff(bij.conj()));
            }
        }
    }
    terms
}
