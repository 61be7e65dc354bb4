//! Root-system data and deformation parameters.
//!
//! Node ordering follows Bourbaki (1-based in the docs, 0-based in code):
//!
//! - `A_n`: the chain `1 - 2 - ... - n`.
//! - `D_n`: the chain `1 - 2 - ... - (n-2)`, with `n-2` joined to both `n-1`
//!   and `n`.
//! - `E_n` (`n = 6, 7, 8`): the chain `1 - 3 - 4 - 5 - ... - n`, with node `2`
//!   joined to node `4`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::monomial::PqMonomial;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SeriesType {
    A,
    D,
    E,
}

impl fmt::Display for SeriesType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SeriesType::A => "A",
            SeriesType::D => "D",
            SeriesType::E => "E",
        };
        f.write_str(s)
    }
}

/// Symmetric, simply-laced Cartan matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CartanMatrix {
    series: SeriesType,
    entries: Vec<Vec<i64>>,
}

impl CartanMatrix {
    pub fn new(series: SeriesType, rank: usize) -> Result<Self> {
        let valid = match series {
            SeriesType::A => rank >= 1,
            SeriesType::D => rank >= 4,
            SeriesType::E => (6..=8).contains(&rank),
        };
        if !valid {
            return Err(Error::Config(format!(
                "rank {rank} is not valid for type {series} (A: >=1, D: >=4, E: 6/7/8)"
            )));
        }

        let mut edges: Vec<(usize, usize)> = Vec::new();
        match series {
            SeriesType::A => edges.extend((0..rank.saturating_sub(1)).map(|k| (k, k + 1))),
            SeriesType::D => {
                edges.extend((0..rank - 3).map(|k| (k, k + 1)));
                edges.push((rank - 3, rank - 2));
                edges.push((rank - 3, rank - 1));
            }
            SeriesType::E => {
                edges.push((0, 2));
                edges.push((1, 3));
                edges.extend((2..rank - 1).map(|k| (k, k + 1)));
            }
        }

        let mut entries = vec![vec![0i64; rank]; rank];
        for (k, row) in entries.iter_mut().enumerate() {
            row[k] = 2;
        }
        for (a, b) in edges {
            entries[a][b] = -1;
            entries[b][a] = -1;
        }
        Ok(Self { series, entries })
    }

    /// Builds a matrix from raw entries; used for synthetic checks.
    pub fn from_entries(series: SeriesType, entries: Vec<Vec<i64>>) -> Result<Self> {
        let m = Self { series, entries };
        m.validate()?;
        Ok(m)
    }

    pub fn series(&self) -> SeriesType {
        self.series
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.entries[i][j]
    }

    pub fn entries(&self) -> &[Vec<i64>] {
        &self.entries
    }

    pub fn label(&self) -> String {
        format!("{}{}", self.series, self.rank())
    }

    /// Pairs `(i, j)` with `i != j` and `A_ij = -1`.
    pub fn adjacent_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.rank();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j && self.entries[i][j] == -1 {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// `(A x)_i` for an integer vector `x`.
    pub fn apply(&self, x: &[i64]) -> Vec<i64> {
        self.entries
            .iter()
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Checks symmetry, unit diagonal 2, off-diagonal in {0, -1} and
    /// positive definiteness through the leading principal minors.
    pub fn validate(&self) -> Result<()> {
        let n = self.rank();
        if n == 0 {
            return Err(Error::Config("empty Cartan matrix".into()));
        }
        for (i, row) in self.entries.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Config("Cartan matrix is not square".into()));
            }
            for (j, &a) in row.iter().enumerate() {
                if a != self.entries[j][i] {
                    return Err(Error::Config(format!("A[{i}][{j}] != A[{j}][{i}]")));
                }
                if i == j && a != 2 {
                    return Err(Error::Config(format!("diagonal entry A[{i}][{i}] = {a}")));
                }
                if i != j && a != 0 && a != -1 {
                    return Err(Error::Config(format!(
                        "off-diagonal entry A[{i}][{j}] = {a} is not simply-laced"
                    )));
                }
            }
        }
        for k in 1..=n {
            if leading_minor(&self.entries, k) <= 0 {
                return Err(Error::Config(format!(
                    "leading principal minor of order {k} is not positive"
                )));
            }
        }
        Ok(())
    }
}

/// Determinant of the leading `k x k` block (fraction-free Bareiss).
pub fn leading_minor(entries: &[Vec<i64>], k: usize) -> i128 {
    let mut m: Vec<Vec<i128>> = entries[..k]
        .iter()
        .map(|row| row[..k].iter().map(|&v| v as i128).collect())
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for col in 0..k {
        if m[col][col] == 0 {
            match (col + 1..k).find(|&r| m[r][col] != 0) {
                Some(r) => {
                    m.swap(col, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for r in col + 1..k {
            for c in col + 1..k {
                m[r][c] = (m[r][c] * m[col][col] - m[r][col] * m[col][c]) / prev;
            }
        }
        prev = m[col][col];
    }
    sign * m[k - 1][k - 1]
}

/// Parses labels such as `A2`, `D4`, `E8`.
impl FromStr for CartanMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut chars = s.chars();
        let series = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => SeriesType::A,
            Some('D') => SeriesType::D,
            Some('E') => SeriesType::E,
            _ => return Err(Error::Config(format!("unknown algebra label {s:?}"))),
        };
        let rank: usize = chars
            .as_str()
            .trim_start_matches('_')
            .parse()
            .map_err(|_| Error::Config(format!("bad rank in algebra label {s:?}")))?;
        CartanMatrix::new(series, rank)
    }
}

/// Deformation parameters with the derived `β` and `q̃`.
///
/// `β = 1 - Log p / Log q` so that `q^{1-β} = p` on the principal branch, and
/// `q̃ = p^c / q`, with `p^c = exp(c Log p)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DeformationParams {
    pub p: C64,
    pub q: C64,
    pub c: Rational64,
    pub beta: C64,
    pub qtilde: C64,
    log_p: C64,
    log_q: C64,
    sqrt_p: C64,
    sqrt_q: C64,
}

impl DeformationParams {
    pub fn new(p: C64, q: C64, c: Rational64) -> Result<Self> {
        if !(p.norm() > 0.0 && p.norm() < 1.0) {
            return Err(Error::Domain(format!("need 0 < |p| < 1, got |p| = {}", p.norm())));
        }
        if !(q.norm() > 0.0 && q.norm() < 1.0) {
            return Err(Error::Domain(format!("need 0 < |q| < 1, got |q| = {}", q.norm())));
        }
        let ratio = (p / q).norm();
        if ratio >= 1.0 {
            return Err(Error::Domain(format!("need |p/q| < 1, got |p/q| = {ratio}")));
        }
        let log_p = p.ln();
        let log_q = q.ln();
        let beta = C64::new(1.0, 0.0) - log_p / log_q;
        let p_c = if c.is_integer() {
            p.powi(*c.numer() as i32)
        } else {
            (log_p * rational_to_f64(c)).exp()
        };
        let qtilde = p_c / q;
        if qtilde.norm() >= 1.0 {
            return Err(Error::Domain(format!(
                "need |q̃| = |p^c/q| < 1 for theta_q̃ convergence, got {}",
                qtilde.norm()
            )));
        }
        Ok(Self {
            p,
            q,
            c,
            beta,
            qtilde,
            log_p,
            log_q,
            sqrt_p: (log_p * 0.5).exp(),
            sqrt_q: (log_q * 0.5).exp(),
        })
    }

    pub fn real(p: f64, q: f64, c: i64) -> Result<Self> {
        Self::new(C64::new(p, 0.0), C64::new(q, 0.0), Rational64::from_integer(c))
    }

    pub fn c_f64(&self) -> f64 {
        rational_to_f64(self.c)
    }

    pub fn is_level_one(&self) -> bool {
        self.c == Rational64::from_integer(1)
    }

    pub fn log_p(&self) -> C64 {
        self.log_p
    }

    pub fn log_q(&self) -> C64 {
        self.log_q
    }

    pub fn sqrt_p(&self) -> C64 {
        self.sqrt_p
    }

    pub fn sqrt_q(&self) -> C64 {
        self.sqrt_q
    }

    /// `p^a q^b := exp(a Log p + b Log q)` for real exponents.
    pub fn pq_pow(&self, a: f64, b: f64) -> C64 {
        (self.log_p * a + self.log_q * b).exp()
    }

    /// `q̃^e` under the convention `q̃^e = p^{c e} q^{-e}`.
    pub fn qtilde_pow(&self, e: f64) -> C64 {
        self.pq_pow(self.c_f64() * e, -e)
    }

    pub fn eval(&self, m: PqMonomial) -> C64 {
        m.eval(self)
    }
}

pub fn rational_to_f64(r: Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Parses `0.3`, `-0.2+0.1i`, `0.05i`, `1e-2-3e-3i`.
pub fn parse_complex(s: &str) -> Result<C64> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Config(format!("cannot parse complex number {s:?}"));
    if t.is_empty() {
        return Err(bad());
    }
    if let Some(body) = t.strip_suffix('i').or_else(|| t.strip_suffix('j')) {
        // split at the last sign that is not part of an exponent
        let bytes = body.as_bytes();
        let mut split = None;
        for k in (1..bytes.len()).rev() {
            if (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E') {
                split = Some(k);
                break;
            }
        }
        let (re, im) = match split {
            Some(k) => (&body[..k], &body[k..]),
            None => ("0", body),
        };
        let im = match im {
            "" | "+" => "1",
            "-" => "-1",
            other => other,
        };
        let re: f64 = re.parse().map_err(|_| bad())?;
        let im: f64 = im.parse().map_err(|_| bad())?;
        Ok(C64::new(re, im))
    } else {
        let re: f64 = t.parse().map_err(|_| bad())?;
        Ok(C64::new(re, 0.0))
    }
}

pub fn parse_rational(s: &str) -> Result<Rational64> {
    let t = s.trim();
    let bad = || Error::Config(format!("cannot parse rational number {s:?}"));
    match t.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.trim().parse().map_err(|_| bad())?;
            let d: i64 = d.trim().parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            Ok(Rational64::new(n, d))
        }
        None => Ok(Rational64::from_integer(t.parse().map_err(|_| bad())?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a_series_small_ranks() {
        let a1 = CartanMatrix::new(SeriesType::A, 1).unwrap();
        assert_eq!(a1.entries(), &[vec![2]]);
        let a2 = CartanMatrix::new(SeriesType::A, 2).unwrap();
        assert_eq!(a2.entries(), &[vec![2, -1], vec![-1, 2]]);
    }

    #[test]
    fn d4_central_node() {
        let d4 = CartanMatrix::new(SeriesType::D, 4).unwrap();
        // node 2 (index 1) is joined to 1, 3, 4
        for k in [0, 2, 3] {
            assert_eq!(d4.entry(1, k), -1);
        }
        assert_eq!(d4.entry(0, 2), 0);
        assert_eq!(d4.entry(2, 3), 0);
    }

    #[test]
    fn e_series_branch_at_node_four() {
        let e6 = CartanMatrix::new(SeriesType::E, 6).unwrap();
        assert_eq!(e6.entry(1, 3), -1);
        assert_eq!(e6.entry(0, 2), -1);
        assert_eq!(e6.entry(2, 3), -1);
        assert_eq!(e6.entry(1, 2), 0);
        // det E6 = 3, E7 = 2, E8 = 1
        assert_eq!(leading_minor(e6.entries(), 6), 3);
        let e7 = CartanMatrix::new(SeriesType::E, 7).unwrap();
        assert_eq!(leading_minor(e7.entries(), 7), 2);
        let e8 = CartanMatrix::new(SeriesType::E, 8).unwrap();
        assert_eq!(leading_minor(e8.entries(), 8), 1);
    }

    #[test]
    fn every_supported_label_is_valid() {
        for n in 1..=9 {
            CartanMatrix::new(SeriesType::A, n).unwrap().validate().unwrap();
        }
        for n in 4..=9 {
            let d = CartanMatrix::new(SeriesType::D, n).unwrap();
            d.validate().unwrap();
            assert_eq!(leading_minor(d.entries(), n), 4);
        }
        for n in 6..=8 {
            CartanMatrix::new(SeriesType::E, n).unwrap().validate().unwrap();
        }
    }

    #[test]
    fn invalid_ranks_rejected() {
        assert!(CartanMatrix::new(SeriesType::A, 0).is_err());
        assert!(CartanMatrix::new(SeriesType::D, 3).is_err());
        assert!(CartanMatrix::new(SeriesType::E, 5).is_err());
        assert!(CartanMatrix::new(SeriesType::E, 9).is_err());
        assert!("B3".parse::<CartanMatrix>().is_err());
    }

    #[test]
    fn non_positive_definite_rejected() {
        // affine A_2^(1): a triangle, determinant zero
        let tri = vec![vec![2, -1, -1], vec![-1, 2, -1], vec![-1, -1, 2]];
        assert!(CartanMatrix::from_entries(SeriesType::A, tri).is_err());
    }

    #[test]
    fn label_parsing() {
        assert_eq!("A2".parse::<CartanMatrix>().unwrap().rank(), 2);
        assert_eq!("d_5".parse::<CartanMatrix>().unwrap().label(), "D5");
    }

    #[test]
    fn params_reference_point() {
        let prm = DeformationParams::real(0.09, 0.3, 1).unwrap();
        let beta = 1.0 - 0.09f64.ln() / 0.3f64.ln();
        assert!((prm.beta - C64::new(beta, 0.0)).norm() < 1e-14);
        assert!((prm.beta - C64::new(-1.0, 0.0)).norm() < 1e-12);
        assert!((prm.qtilde - C64::new(0.3, 0.0)).norm() < 1e-15);

        let prm2 = DeformationParams::real(0.09, 0.3, 2).unwrap();
        assert!((prm2.qtilde - C64::new(0.027, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn params_domain_errors() {
        let e = DeformationParams::real(0.3, 0.3, 1).unwrap_err();
        assert!(e.to_string().contains("|p/q| < 1"), "{e}");
        let e = DeformationParams::real(0.09, 1.2, 1).unwrap_err();
        assert!(e.to_string().contains("|q| < 1"), "{e}");
        assert!(DeformationParams::real(0.0, 0.3, 1).is_err());
    }

    #[test]
    fn beta_round_trip() {
        for (p, q) in [
            (C64::new(0.09, 0.0), C64::new(0.3, 0.0)),
            (C64::new(0.05, 0.02), C64::new(0.4, -0.1)),
            (C64::new(-0.1, 0.05), C64::new(0.2, 0.5)),
        ] {
            let prm = DeformationParams::new(p, q, Rational64::from_integer(1)).unwrap();
            let back = (prm.log_q() * (C64::new(1.0, 0.0) - prm.beta)).exp();
            assert!((back - p).norm() / p.norm() <= 1e-12);
            assert!((prm.q * prm.qtilde - p).norm() < 1e-15);
        }
    }

    #[test]
    fn complex_parsing() {
        assert_eq!(parse_complex("0.3").unwrap(), C64::new(0.3, 0.0));
        assert_eq!(parse_complex("0.1-0.2i").unwrap(), C64::new(0.1, -0.2));
        assert_eq!(parse_complex("-0.05i").unwrap(), C64::new(0.0, -0.05));
        assert_eq!(parse_complex("1e-2+3e-3i").unwrap(), C64::new(0.01, 0.003));
        assert!(parse_complex("abc").is_err());
        assert_eq!(parse_rational("3/2").unwrap(), Rational64::new(3, 2));
    }
}
