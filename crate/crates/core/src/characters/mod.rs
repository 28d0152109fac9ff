//! Laurent expansions at `t = 0` of the index character
//! `F(ξ, t) = Σ_{u ∈ σ^∨ ∩ M} e^{-t<ξ,u>}` and the weight character
//! `C_η(ξ, t) = Σ_{u ∈ σ^∨ ∩ M} e^{-t<ξ,u>} <η, u>`.
//!
//! For an affine toric variety every weight space `R_u` with
//! `u ∈ σ^∨ ∩ M` is one-dimensional and all others vanish, so both characters
//! are plain lattice sums over `σ^∨`. Each half-open simplicial piece with
//! generators `u_k` and box points `p` contributes
//!
//! ```text
//! Σ_p e^{-t<ξ,p>} Π_k 1 / (1 - e^{-t a_k}),    a_k = <ξ, u_k>,
//! ```
//!
//! which is expanded with `x / (1 - e^{-x}) = Σ (-1)^j B_j x^j / j!`. The weight
//! character is `-(1/t) ∂_ε F(ξ + εη, t)` applied piecewise, giving the extra
//! factor `<η,p> + Σ_k <η,u_k> / (e^{t a_k} - 1)`.

mod decompose;
mod oracle;
mod series;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::ReebVector;
use crate::scalar::{dot_int, factorial, Scalar};

pub use decompose::{decompose_dual, SimplicialPiece, DEFAULT_MAX_BOX_POINTS};
pub use oracle::{auto_truncated_oracle, suggest_cutoff, truncated_character_oracle, OracleValue};

use series::PowerSeries;

/// Default expansion depth past the leading term.
pub const DEFAULT_MAX_ORDER: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CharacterOptions {
    pub max_order: usize,
}

impl Default for CharacterOptions {
    fn default() -> Self {
        CharacterOptions {
            max_order: DEFAULT_MAX_ORDER,
        }
    }
}

/// `Σ_{k} coeffs[k] t^{order_low + k}`.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentSeries<S> {
    pub order_low: i32,
    pub coeffs: Vec<S>,
}

impl<S: Scalar> LaurentSeries<S> {
    /// Coefficient of `t^exponent`, if within the computed range.
    pub fn coeff(&self, exponent: i32) -> Option<&S> {
        let idx = exponent - self.order_low;
        if idx < 0 {
            return None;
        }
        self.coeffs.get(idx as usize)
    }

    pub fn order_high(&self) -> i32 {
        self.order_low + self.coeffs.len() as i32 - 1
    }

    /// Evaluates the truncated series at `t`.
    pub fn eval(&self, t: f64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c.to_f64() * t.powi(self.order_low + k as i32))
            .sum()
    }

    /// `(a_0, a_1)` from `F = (n-1)! a_0 / t^n + (n-2)! a_1 / t^{n-1} + ...`.
    pub fn index_coefficients(&self, n: usize) -> Result<(S, S)> {
        if n < 2 {
            return Err(Error::DimensionTooSmall {
                dim: n,
                what: "a_1 coefficient",
            });
        }
        let lead = self.required(-(n as i32))?;
        let next = self.required(-(n as i32) + 1)?;
        Ok((lead / factorial::<S>(n - 1), next / factorial::<S>(n - 2)))
    }

    /// `a_0` alone; defined in every dimension.
    pub fn leading_index_coefficient(&self, n: usize) -> Result<S> {
        Ok(self.required(-(n as i32))? / factorial::<S>(n.saturating_sub(1)))
    }

    /// `(b_0, b_1)` from `C_η = n! b_0 / t^{n+1} + (n-1)! b_1 / t^n + ...`.
    pub fn weight_coefficients(&self, n: usize) -> Result<(S, S)> {
        let lead = self.required(-(n as i32) - 1)?;
        let next = self.required(-(n as i32))?;
        Ok((
            lead / factorial::<S>(n),
            next / factorial::<S>(n.saturating_sub(1)),
        ))
    }

    fn required(&self, exponent: i32) -> Result<S> {
        self.coeff(exponent)
            .cloned()
            .ok_or(Error::InvalidArgument(format!(
                "coefficient of t^{exponent} not computed"
            )))
    }
}

fn check_order(order: usize, opts: CharacterOptions) -> Result<()> {
    if order > opts.max_order {
        return Err(Error::OrderTooLarge {
            requested: order,
            max: opts.max_order,
        });
    }
    Ok(())
}

fn heights<S: Scalar>(piece: &SimplicialPiece, xi: &[S]) -> Result<Vec<S>> {
    piece
        .generators
        .iter()
        .enumerate()
        .map(|(k, u)| {
            let a = dot_int(u, xi);
            if a <= S::zero() {
                Err(Error::NotInReebCone { index: k })
            } else {
                Ok(a)
            }
        })
        .collect()
}

/// `Π_k a_k t / (1 - e^{-a_k t}) / Π_k a_k`, the piece factor without box sum.
fn piece_prefactor<S: Scalar>(a: &[S], degree: usize) -> PowerSeries<S> {
    let mut s = PowerSeries::constant(S::one(), degree);
    let mut prod = S::one();
    for ak in a {
        s = s.mul(&PowerSeries::todd(ak, degree));
        prod = prod * ak.clone();
    }
    s.scale(&(S::one() / prod))
}

fn sum_in_order<S: Scalar>(terms: Vec<PowerSeries<S>>, degree: usize) -> PowerSeries<S> {
    let mut total = PowerSeries::zero(degree);
    for t in &terms {
        total.add_assign(t);
    }
    total
}

/// Laurent expansion of the index character through `t^{-n+order}`.
///
/// Exact for rational `ξ`. The leading coefficient is `(n-1)! a_0` with
/// `a_0 = n vol(Q_ξ)`.
pub fn index_character<S: Scalar>(
    pieces: &[SimplicialPiece],
    xi: &ReebVector<S>,
    order: usize,
    opts: CharacterOptions,
) -> Result<LaurentSeries<S>> {
    check_order(order, opts)?;
    let n = xi.xi().len();
    let xi = xi.xi();
    let terms: Vec<PowerSeries<S>> = pieces
        .par_iter()
        .map(|piece| {
            let a = heights(piece, xi)?;
            let pre = piece_prefactor(&a, order);
            let mut box_sum = PowerSeries::zero(order);
            for p in &piece.box_points {
                box_sum.add_assign(&PowerSeries::exp_linear(&-dot_int(p, xi), order));
            }
            Ok(pre.mul(&box_sum))
        })
        .collect::<Result<_>>()?;
    Ok(LaurentSeries {
        order_low: -(n as i32),
        coeffs: sum_in_order(terms, order).coeffs,
    })
}

/// Laurent expansion of the weight character through `t^{-(n+1)+order}`.
pub fn weight_character<S: Scalar>(
    pieces: &[SimplicialPiece],
    xi: &ReebVector<S>,
    eta: &[S],
    order: usize,
    opts: CharacterOptions,
) -> Result<LaurentSeries<S>> {
    check_order(order, opts)?;
    let n = xi.xi().len();
    if eta.len() != n {
        return Err(Error::DimensionMismatch {
            index: 0,
            expected: n,
            found: eta.len(),
        });
    }
    let xi = xi.xi();
    let terms: Vec<PowerSeries<S>> = pieces
        .par_iter()
        .map(|piece| {
            let a = heights(piece, xi)?;
            let pre = piece_prefactor(&a, order);
            // Σ_p e^{-t<ξ,p>} <η,p> t
            let mut weighted = PowerSeries::zero(order);
            let mut plain = PowerSeries::zero(order);
            for p in &piece.box_points {
                let e = PowerSeries::exp_linear(&-dot_int(p, xi), order);
                weighted.add_assign(&e.scale(&dot_int(p, eta)));
                plain.add_assign(&e);
            }
            // Σ_k (<η,u_k> / a_k) · a_k t / (e^{a_k t} - 1)
            let mut edge = PowerSeries::zero(order);
            for (u, ak) in piece.generators.iter().zip(&a) {
                let beta = dot_int(u, eta);
                if beta.is_zero() {
                    continue;
                }
                edge.add_assign(&PowerSeries::bernoulli_gen(ak, order).scale(&(beta / ak.clone())));
            }
            let mut bracket = weighted.shift_up();
            bracket.add_assign(&plain.mul(&edge));
            Ok(pre.mul(&bracket))
        })
        .collect::<Result<_>>()?;
    Ok(LaurentSeries {
        order_low: -(n as i32) - 1,
        coeffs: sum_in_order(terms, order).coeffs,
    })
}
