//! Spectra of Cayley graphs on F_q^n from the first adjacency row.
//!
//! For `q = 2` the eigenvalues are the Walsh-Hadamard transform of the row,
//! computed in integers. For odd `q` they are the `n`-dimensional DFT
//! `sum_x G[0,x] w^<j,x>`, `w = exp(2 pi i / q)`.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::functions::FunctionSpec;
use crate::graph::{graph_first_row, verify_block_circulant, FccGraph};
use crate::gf::Limits;

/// Largest tolerated imaginary part, relative to `max(1, degree)`.
pub const IMAG_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    /// Eigenvalue of the character indexed by each rank.
    pub eigenvalues: Vec<f64>,
    /// Exact values when `q = 2`.
    pub exact: Option<Vec<i64>>,
}

impl Spectrum {
    pub fn max(&self) -> f64 {
        self.eigenvalues.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn exact_extremes(&self) -> Option<(i64, i64)> {
        let e = self.exact.as_ref()?;
        Some((*e.iter().max()?, *e.iter().min()?))
    }

    pub fn to_csv(&self, header: &[String]) -> String {
        let mut out = String::new();
        for h in header {
            out.push_str(&format!("# {h}\n"));
        }
        out.push_str("index_rank,eigenvalue\n");
        for (i, x) in self.eigenvalues.iter().enumerate() {
            match &self.exact {
                Some(e) => out.push_str(&format!("{i},{}\n", e[i])),
                None => out.push_str(&format!("{i},{x:.12}\n")),
            }
        }
        out
    }
}

fn length_of(n: usize, q: u32) -> Result<usize> {
    let mut size = 1usize;
    let mut len = 0;
    while size < n {
        size *= q as usize;
        len += 1;
    }
    if size != n || n == 0 {
        return Err(Error::invalid(format!("row length {n} is not a power of {q}")));
    }
    Ok(len)
}

/// In-place integer Walsh-Hadamard transform.
pub fn walsh_hadamard(values: &mut [i64]) {
    let n = values.len();
    let mut h = 1;
    while h < n {
        for block in (0..n).step_by(2 * h) {
            for i in block..block + h {
                let (a, b) = (values[i], values[i + h]);
                values[i] = a + b;
                values[i + h] = a - b;
            }
        }
        h *= 2;
    }
}

pub fn eigenvalues_from_first_row(row: &[u8], q: u32) -> Result<Spectrum> {
    let len = length_of(row.len(), q)?;
    if q == 2 {
        let mut v: Vec<i64> = row.iter().map(|&x| x as i64).collect();
        walsh_hadamard(&mut v);
        return Ok(Spectrum {
            eigenvalues: v.iter().map(|&x| x as f64).collect(),
            exact: Some(v),
        });
    }
    let qs = q as usize;
    let roots: Vec<Complex64> = (0..qs)
        .map(|j| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / q as f64))
        .collect();
    let mut v: Vec<Complex64> = row.iter().map(|&x| Complex64::new(x as f64, 0.0)).collect();
    let mut buf = vec![Complex64::new(0.0, 0.0); qs];
    for pos in 0..len {
        let step = qs.pow((len - 1 - pos) as u32);
        for base in 0..row.len() {
            if (base / step) % qs != 0 {
                continue;
            }
            for (j, slot) in buf.iter_mut().enumerate() {
                *slot = (0..qs).map(|x| v[base + x * step] * roots[(j * x) % qs]).sum();
            }
            for (j, &c) in buf.iter().enumerate() {
                v[base + j * step] = c;
            }
        }
    }
    let degree = row.iter().filter(|&&x| x != 0).count() as f64;
    let tol = IMAG_TOL * degree.max(1.0);
    if let Some((i, c)) = v.iter().enumerate().find(|(_, c)| c.im.abs() > tol) {
        return Err(Error::NotApplicable(format!(
            "eigenvalue {i} has imaginary part {:e}; adjacency not symmetric under negation",
            c.im
        )));
    }
    Ok(Spectrum {
        eigenvalues: v.iter().map(|c| c.re).collect(),
        exact: None,
    })
}

/// Spectrum of a graph with the block-circulant structure; checked first.
pub fn graph_spectrum(g: &FccGraph) -> Result<Spectrum> {
    if !g.cayley {
        let rows = g.rows();
        if let Some(v) = verify_block_circulant(&rows, g.q)? {
            return Err(Error::NotApplicable(format!(
                "graph is not block circulant (level {}, entry ({}, {}))",
                v.level, v.row, v.col
            )));
        }
    }
    eigenvalues_from_first_row(&g.first_row(), g.q)
}

/// `alpha <= -N lambda_min / (lambda_max - lambda_min)`; `N` for an edgeless graph.
pub fn cvetkovic_alpha_bound(s: &Spectrum) -> f64 {
    let n = s.eigenvalues.len() as f64;
    let (max, min) = (s.max(), s.min());
    if max - min <= 0.0 {
        return n;
    }
    -n * min / (max - min)
}

pub fn cvetkovic_alpha_bound_exact(s: &Spectrum) -> Option<BigRational> {
    let (max, min) = s.exact_extremes()?;
    let n = s.eigenvalues.len() as i64;
    if max == min {
        return Some(BigRational::from_integer(BigInt::from(n)));
    }
    Some(BigRational::new(BigInt::from(-n * min), BigInt::from(max - min)))
}

/// Does `q^r >= 1 - lambda_max / lambda_min` hold?
fn spectral_condition(s: &Spectrum, q: u32, r: usize) -> bool {
    let qr = (q as f64).powi(r as i32);
    if let Some((max, min)) = s.exact_extremes() {
        if min >= 0 {
            return true;
        }
        // q^r * (-min) >= max - min
        return (q as i128).pow(r as u32) * (-min as i128) >= (max - min) as i128;
    }
    let (max, min) = (s.max(), s.min());
    if min >= -IMAG_TOL {
        return true;
    }
    qr * -min >= (max - min) * (1.0 - IMAG_TOL)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralStep {
    pub r: usize,
    pub lambda_max: f64,
    pub lambda_min: f64,
    pub ratio: f64,
    pub holds: bool,
}

/// Smallest `r <= r_max` with `q^r >= 1 - lambda_max/lambda_min` for
/// `G_f(t,k,r)`, with the per-`r` trace.
pub fn eigenvalue_redundancy_bound(
    f: &FunctionSpec,
    t: usize,
    r_max: usize,
    limits: &Limits,
) -> Result<(Option<usize>, Vec<SpectralStep>)> {
    if !f.is_linear() {
        return Err(Error::NotLinear);
    }
    let mut trace = Vec::new();
    for r in 0..=r_max {
        let row = graph_first_row(f, t, r, limits.spectrum_vertices)?;
        let s = eigenvalues_from_first_row(&row, f.q())?;
        let holds = spectral_condition(&s, f.q(), r);
        let (max, min) = (s.max(), s.min());
        trace.push(SpectralStep {
            r,
            lambda_max: max,
            lambda_min: min,
            ratio: if min < 0.0 { 1.0 - max / min } else { f64::NAN },
            holds,
        });
        if holds {
            return Ok((Some(r), trace));
        }
    }
    Ok((None, trace))
}
