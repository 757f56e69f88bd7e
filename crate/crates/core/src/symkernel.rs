//! Symmetric powers of the ideal `(f, g)` for a coprime pair.
//!
//! Basis `uᵢ = e₁ⁱ e₂^(r−i)`, `i = 0..=r`. The presentation `δ` is the
//! `(r+1)×r` matrix with `−f` on the diagonal and `g` on the subdiagonal;
//! `ω = Σ fⁱ g^(r−i) uᵢ^∨` spans the kernel of `δ^∨`.

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exactpoly::{canonical_vars, gcd, gcd_many, rat, Poly};
use crate::spectral::RatSampler;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymPresentation {
    pub r: u32,
    pub f: Poly,
    pub g: Poly,
    /// Row-major, `r + 1` rows by `r` columns.
    pub delta: Vec<Vec<Poly>>,
}

pub fn delta_matrix(f: &Poly, g: &Poly, r: u32) -> Result<SymPresentation> {
    if r < 2 {
        return Err(Error::domain("symmetric power needs r >= 2"));
    }
    if f.is_zero() && g.is_zero() || !gcd(f, g)?.is_constant() {
        return Err(Error::hypothesis(format!("gcd(f,g)=1 fails for f = {f}, g = {g}")));
    }
    let r_ = r as usize;
    let mut delta = vec![vec![Poly::zero(); r_]; r_ + 1];
    for j in 0..r_ {
        delta[j][j] = -f;
        delta[j + 1][j] = g.clone();
    }
    Ok(SymPresentation {
        r,
        f: f.clone(),
        g: g.clone(),
        delta,
    })
}

/// `(g^r, f·g^(r−1), …, f^r)`.
pub fn kernel_generator(p: &SymPresentation) -> Vec<Poly> {
    (0..=p.r).map(|i| &p.f.pow(i) * &p.g.pow(p.r - i)).collect()
}

/// `ω·(column j of δ)` for every column; all zero for a valid presentation.
pub fn annihilation_residues(p: &SymPresentation, w: &[Poly]) -> Vec<Poly> {
    (0..p.r as usize)
        .map(|j| dot(w, &column(&p.delta, j)))
        .collect()
}

fn column(m: &[Vec<Poly>], j: usize) -> Vec<Poly> {
    m.iter().map(|row| row[j].clone()).collect()
}

fn dot(a: &[Poly], b: &[Poly]) -> Poly {
    a.iter().zip(b).fold(Poly::zero(), |acc, (x, y)| &acc + &(x * y))
}

/// Fraction-free (Bareiss) echelon form; every division is exact since
/// each entry is a minor of the input. Returns the pivot columns.
fn bareiss_echelon(m: &mut [Vec<Poly>]) -> Result<Vec<usize>> {
    let ncols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut prev = Poly::one();
    let mut row = 0;
    for col in 0..ncols {
        if row == m.len() {
            break;
        }
        let Some(pr) = (row..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(row, pr);
        for i in row + 1..m.len() {
            for j in col + 1..ncols {
                let t = &(&m[i][j] * &m[row][col]) - &(&m[i][col] * &m[row][j]);
                m[i][j] = t
                    .exact_div(&prev)
                    .ok_or_else(|| Error::domain("fraction-free elimination left a remainder"))?;
            }
            m[i][col] = Poly::zero();
        }
        prev = m[row][col].clone();
        pivots.push(col);
        row += 1;
    }
    Ok(pivots)
}

/// Primitive generator of the right kernel of `m` over the fraction field,
/// or the nullity when it is not 1.
fn kernel_vector(mut m: Vec<Vec<Poly>>) -> Result<std::result::Result<Vec<Poly>, usize>> {
    let ncols = m.first().map_or(0, Vec::len);
    let pivots = bareiss_echelon(&mut m)?;
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    if free.len() != 1 {
        return Ok(Err(free.len()));
    }
    let fc = free[0];
    let mut v = vec![Poly::zero(); ncols];
    // Cramer: the free coordinate carries the last pivot as common denominator
    v[fc] = pivots
        .last()
        .map_or_else(Poly::one, |&c| m[pivots.len() - 1][c].clone());
    for (i, &pc) in pivots.iter().enumerate().rev() {
        let mut acc = &m[i][fc] * &v[fc];
        for &pj in &pivots[i + 1..] {
            acc = &acc + &(&m[i][pj] * &v[pj]);
        }
        v[pc] = (-&acc)
            .exact_div(&m[i][pc])
            .ok_or_else(|| Error::domain("back substitution left a remainder"))?;
    }
    let content = gcd_many(&v)?;
    Ok(Ok(v.iter().map(|p| p.exact_div(&content).unwrap()).collect()))
}

/// Independent computation of `ker(δ^∨)` by exact elimination over the fraction field.
pub fn kernel_solver(p: &SymPresentation) -> Result<Vec<Poly>> {
    // rows of δ^T: the conditions φ·(column j) = 0
    let m: Vec<Vec<Poly>> = (0..p.r as usize).map(|j| column(&p.delta, j)).collect();
    kernel_vector(m)?.map_err(|nullity| {
        Error::Falsification(format!(
            "kernel of the dual presentation has rank {nullity} for f = {}, g = {}, r = {}",
            p.f, p.g, p.r
        ))
    })
}

/// `a = c·b` for a nonzero rational `c`.
pub fn is_unit_multiple(a: &[Poly], b: &[Poly]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let Some(k) = b.iter().position(|x| !x.is_zero()) else {
        return a.iter().all(Poly::is_zero);
    };
    let Some(c) = a[k].exact_div(&b[k]).and_then(|q| q.constant_value()) else {
        return false;
    };
    c != rat(0) && a.iter().zip(b).all(|(x, y)| *x == y.scale(&c))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TorsionFreeReport {
    pub samples: u32,
    pub seed: u64,
    pub passed: u32,
    /// Random vectors off the kernel of ω, each checked to stay off it.
    pub off_kernel_checked: u32,
    pub cases: Vec<Value>,
}

fn random_form(vars: &[String], deg: u32, rng: &mut RatSampler) -> Poly {
    let mut acc = Poly::zero();
    let (a, b) = (vars[0].as_str(), vars[1].as_str());
    for i in 0..=deg {
        for j in 0..=(deg - i) {
            let c = rng.next_int(-3, 3);
            acc = &acc + &Poly::monomial(&[a, b], &[i, j], rat(c));
        }
    }
    acc
}

/// Solves `δ·y = a`. δ has full column rank, so the solution over the
/// fraction field is unique and a square triangular block of δ determines
/// it; `Some(y)` when it has polynomial entries and reproduces `a` exactly.
fn preimage(p: &SymPresentation, a: &[Poly]) -> Result<Option<Vec<Poly>>> {
    let r = p.r as usize;
    let mut y: Vec<Poly> = Vec::with_capacity(r);
    if !p.f.is_zero() {
        // rows 0..r: −f·y_i + g·y_(i−1) = a_i
        let neg_f = -&p.f;
        for i in 0..r {
            let rhs = if i == 0 { a[0].clone() } else { &a[i] - &(&p.g * &y[i - 1]) };
            let Some(q) = rhs.exact_div(&neg_f) else {
                return Ok(None);
            };
            y.push(q);
        }
    } else {
        // f = 0 and g is a unit: rows 1..=r read g·y_(i−1) = a_i
        for i in 1..=r {
            let Some(q) = a[i].exact_div(&p.g) else {
                return Ok(None);
            };
            y.push(q);
        }
    }
    let back: Vec<Poly> = (0..=r).map(|i| dot(&p.delta[i], &y)).collect();
    Ok((back == a).then_some(y))
}

/// Samples `φ = (gX − fY)·ψ` for random `ψ`, checks `ω·φ = 0`, and that `φ`
/// lifts through `δ`. Any failure is a falsification.
pub fn torsion_free_witness(p: &SymPresentation, samples: u32, seed: u64) -> Result<TorsionFreeReport> {
    let mut vars = canonical_vars(p.f.occurring_vars().into_iter().chain(p.g.occurring_vars()));
    for v in ["x", "y"] {
        if vars.len() < 2 && !vars.iter().any(|w| w == v) {
            vars.push(v.into());
        }
    }
    let r = p.r as usize;
    let w = kernel_generator(p);
    let mut rng = RatSampler::new(seed);
    let mut cases = Vec::new();
    let mut passed = 0;
    for k in 0..samples {
        let psi: Vec<Poly> = (0..r).map(|_| random_form(&vars, 2, &mut rng)).collect();
        // coefficient of X^i Y^(r−i) in (gX − fY)·Σ b_j X^j Y^(r−1−j)
        let a: Vec<Poly> = (0..=r)
            .map(|i| {
                let up = if i > 0 { &p.g * &psi[i - 1] } else { Poly::zero() };
                let down = if i < r { &p.f * &psi[i] } else { Poly::zero() };
                &up - &down
            })
            .collect();
        if !dot(&w, &a).is_zero() {
            return Err(Error::Falsification(format!("sample {k}: ω does not annihilate (gX − fY)ψ")));
        }
        match preimage(p, &a)? {
            Some(y) => {
                passed += 1;
                cases.push(json!({
                    "sample": k,
                    "phi": a.iter().map(Poly::to_string).collect::<Vec<_>>(),
                    "preimage": y.iter().map(Poly::to_string).collect::<Vec<_>>(),
                }));
            }
            None => {
                return Err(Error::Falsification(format!(
                    "sample {k}: kernel vector of ω is not in the image of δ"
                )))
            }
        }
    }
    let mut off = 0;
    for k in 0..samples {
        let a: Vec<Poly> = (0..=r).map(|_| random_form(&vars, 2, &mut rng)).collect();
        if dot(&w, &a).is_zero() {
            // landed on the kernel by chance; no claim to check
            continue;
        }
        if preimage(p, &a)?.is_some() {
            return Err(Error::Falsification(format!(
                "off-kernel sample {k} lies in the image of δ although ω·φ ≠ 0"
            )));
        }
        off += 1;
    }
    Ok(TorsionFreeReport {
        samples,
        seed,
        passed,
        off_kernel_checked: off,
        cases,
    })
}
