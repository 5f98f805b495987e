//! Conversion of `∂_x`-powers into `∂_w`-powers.

use super::Model;
use crate::exact::{double_factorial, int, Poly, Rational};
use crate::{Error, Result};

/// Tables indexed `[k-1][i-1]` (b = 3, b = 4) or `[k-1][ℓ]` (generic ν).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DxTable {
    /// `∂_x^{2k} = Σ_{i=1}^{2k} T_{k,i}(w)/(1−108w)^{4k−i} ∂_w^i`
    Tri(Vec<Vec<Poly>>),
    /// `∂_x^k = Σ_{i=1}^{k} T̃_{k,i}/(1−24w)^{2k−i} ∂_w^i`
    Quad(Vec<Vec<Rational>>),
    /// `x^k ∂_x^k log w = Σ_ℓ (−1)^{k−ℓ+1} e_{k,ℓ}(ν)/(ν−(ν−1)q)^{k+ℓ}`
    Even(Vec<Vec<Poly>>),
}

pub fn dx_to_dw_table(model: Model, k: usize) -> Result<DxTable> {
    if k == 0 {
        return Err(Error::InvalidInput(
            "derivative tables start at k = 1".into(),
        ));
    }
    Ok(match model {
        Model::Tri => DxTable::Tri(tri_dx_table(k)?),
        Model::Even { nu: 2 } => DxTable::Quad(quad_dx_table(k)),
        Model::Even { .. } => DxTable::Even(even_log_table(k)?),
    })
}

/// `N / (1−108w)^e`
#[derive(Clone)]
struct RatW {
    num: Poly,
    e: i64,
}

fn d_poly() -> Poly {
    Poly::from_ints(&[1, -108])
}

impl RatW {
    fn derivative(&self) -> RatW {
        // (N/D^e)' = (N′D + 108eN)/D^{e+1}
        let num = &(&self.num.derivative() * &d_poly()) + &self.num.scale(&int(108 * self.e));
        RatW { num, e: self.e + 1 }
    }

    fn mul(&self, num: &Poly, e: i64) -> RatW {
        RatW {
            num: &self.num * num,
            e: self.e + e,
        }
    }

    /// Numerator over `D^target`; the denominator must divide.
    fn at_exponent(&self, target: i64) -> Result<Poly> {
        if self.e <= target {
            Ok(&self.num * &d_poly().pow((target - self.e) as u32))
        } else {
            self.num
                .div_exact(&d_poly().pow((self.e - target) as u32))
                .ok_or_else(|| Error::Identity("derivative table denominator too large".into()))
        }
    }
}

/// `T_{k,i}` for `k = 1..=k_max`, built by composing
/// `∂_x² = 72(1−54w)/D³ ∂_w + (1−72w)/D² ∂_w²`, `D = 1 − 108w`.
/// Each entry is checked to have degree ≤ k.
pub fn tri_dx_table(k_max: usize) -> Result<Vec<Vec<Poly>>> {
    let a = Poly::from_ints(&[72, -72 * 54]);
    let b = Poly::from_ints(&[1, -72]);
    let mut rows: Vec<Vec<Poly>> = vec![vec![a.clone(), b.clone()]];
    while rows.len() < k_max {
        let k = rows.len() as i64;
        let prev = rows.last().unwrap();
        let mut acc: Vec<Vec<RatW>> = vec![Vec::new(); prev.len() + 3];
        for (idx, t) in prev.iter().enumerate() {
            let i = idx + 1;
            let f = RatW {
                num: t.clone(),
                e: 4 * k - i as i64,
            };
            let f1 = f.derivative();
            let f2 = f1.derivative();
            // A ∂(f ∂^i) = A f′ ∂^i + A f ∂^{i+1}
            acc[i].push(f1.mul(&a, 3));
            acc[i + 1].push(f.mul(&a, 3));
            // B ∂²(f ∂^i) = B f″ ∂^i + 2B f′ ∂^{i+1} + B f ∂^{i+2}
            acc[i].push(f2.mul(&b, 2));
            acc[i + 1].push(f1.mul(&b.scale(&int(2)), 2));
            acc[i + 2].push(f.mul(&b, 2));
        }
        let k1 = k + 1;
        let mut row = Vec::with_capacity(2 * k1 as usize);
        for i in 1..=(2 * k1) as usize {
            let target = 4 * k1 - i as i64;
            let mut num = Poly::zero();
            for part in &acc[i] {
                num = &num + &part.at_exponent(target)?;
            }
            if num.degree().is_some_and(|d| d as i64 > k1) {
                return Err(Error::Identity(format!(
                    "deg T_{{{k1},{i}}} = {:?} exceeds {k1}",
                    num.degree()
                )));
            }
            row.push(num);
        }
        rows.push(row);
    }
    rows.truncate(k_max);
    Ok(rows)
}

/// `T̃_{k,i}` with `T̃_{m+1,i} = 24(2m−i) T̃_{m,i} + T̃_{m,i−1}`.
pub fn quad_dx_table(k_max: usize) -> Vec<Vec<Rational>> {
    let mut rows = vec![vec![int(1)]];
    while rows.len() < k_max {
        let m = rows.len() as i64;
        let prev = rows.last().unwrap();
        let row = (1..=m + 1)
            .map(|i| {
                let mut v = Rational::from_integer(0.into());
                if i <= m {
                    v += int(24 * (2 * m - i)) * &prev[i as usize - 1];
                }
                if i >= 2 {
                    v += &prev[i as usize - 2];
                }
                v
            })
            .collect();
        rows.push(row);
    }
    rows.truncate(k_max);
    rows
}

/// `e_{k,ℓ}(ν)` with `e_{1,0} = 1` and
/// `e_{m+1,ℓ} = (ℓ+1)e_{m,ℓ+1} + (m+ℓ)(ν+1)e_{m,ℓ} + (m+ℓ−1)ν e_{m,ℓ−1}`.
/// Checks `deg e_{k,ℓ} ≤ k−1` and `e_{k,k−1} = (2k−3)!! ν^{k−1}`.
pub fn even_log_table(k_max: usize) -> Result<Vec<Vec<Poly>>> {
    let nu = Poly::from_ints(&[0, 1]);
    let nu1 = Poly::from_ints(&[1, 1]);
    let mut rows = vec![vec![Poly::from_ints(&[1])]];
    while rows.len() < k_max {
        let m = rows.len() as i64;
        let prev = rows.last().unwrap();
        let get = |l: i64| -> Poly {
            if l < 0 || l >= m {
                Poly::zero()
            } else {
                prev[l as usize].clone()
            }
        };
        let row: Vec<Poly> = (0..=m)
            .map(|l| {
                let a = get(l + 1).scale(&int(l + 1));
                let b = (&nu1 * &get(l)).scale(&int(m + l));
                let c = (&nu * &get(l - 1)).scale(&int(m + l - 1));
                &(&a + &b) + &c
            })
            .collect();
        rows.push(row);
    }
    rows.truncate(k_max);
    for (idx, row) in rows.iter().enumerate() {
        let k = idx as i64 + 1;
        for (l, e) in row.iter().enumerate() {
            if e.degree().is_some_and(|d| d as i64 > k - 1) {
                return Err(Error::Identity(format!(
                    "deg e_{{{k},{l}}} exceeds {}",
                    k - 1
                )));
            }
        }
        let top = Rational::from_integer(double_factorial(2 * k - 3)?);
        let mut expect = vec![Rational::from_integer(0.into()); k as usize];
        expect[k as usize - 1] = top;
        if row[k as usize - 1] != Poly::new(expect) {
            return Err(Error::Identity(format!(
                "e_{{{k},{}}} ≠ (2k−3)!! ν^(k−1)",
                k - 1
            )));
        }
    }
    Ok(rows)
}
