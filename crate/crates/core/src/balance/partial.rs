use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{integer_kernel, Rat};
use crate::lattice::LatticeVector;
use crate::sign::Sign;

#[derive(Clone, Debug)]
pub struct PartialColoring {
    pub signs: Vec<Sign>,
    /// x = Σ ε_v v.
    pub sum: LatticeVector,
    /// Coefficients still fractional when rounding started.
    pub rounded: usize,
    pub kernel_steps: usize,
}

/// Signs for ±1 vectors in Zⁿ with ‖Σ ε_v v‖∞ <= n.
///
/// Fractional coefficients λ ∈ [-1, 1] start at 0 and keep Σ λ_v v = 0.
/// At most n + 1 of them are live at a time; each step moves the live ones
/// along an exact integer kernel direction until one reaches ±1, which
/// freezes it. At the end at most n live coefficients remain and they are
/// rounded (λ >= 0 to +1), moving each coordinate by less than 1 per
/// rounded vector. A greedy single-flip descent then lowers ‖x‖∞ and the
/// number of coordinates attaining it.
pub fn partial_color(vs: &[LatticeVector]) -> Result<PartialColoring> {
    let n = vs
        .first()
        .map(|v| v.dim())
        .ok_or_else(|| Error::Precondition("partial coloring of an empty list".into()))?;
    for v in vs {
        if v.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, got: v.dim() });
        }
        if v.coords().iter().any(|x| x.abs() != 1) {
            return Err(Error::Precondition(format!("{v} is not a ±1 vector")));
        }
    }

    let mut lambda: Vec<Rat> = vec![Rat::zero(); vs.len()];
    let mut frozen: Vec<Option<Sign>> = vec![None; vs.len()];
    let mut live: Vec<usize> = Vec::with_capacity(n + 1);
    let mut next = 0;
    let mut steps = 0;
    loop {
        while live.len() <= n && next < vs.len() {
            live.push(next);
            next += 1;
        }
        let cols: Vec<&LatticeVector> = live.iter().map(|&j| &vs[j]).collect();
        let Some(k) = integer_kernel(&cols) else {
            if next == vs.len() {
                break;
            }
            unreachable!("n + 1 columns in dimension n are dependent");
        };
        steps += 1;
        // Largest t > 0 keeping every live λ + t·k inside [-1, 1].
        let mut t: Option<Rat> = None;
        for (&j, &kj) in live.iter().zip(&k) {
            if kj == 0 {
                continue;
            }
            let bound = if kj > 0 { Rat::one() } else { -Rat::one() };
            let tj = (bound - &lambda[j]) / Rat::from_integer(BigInt::from(kj));
            if t.as_ref().is_none_or(|t| tj < *t) {
                t = Some(tj);
            }
        }
        let t = t.expect("kernel vector is nonzero");
        for (&j, &kj) in live.iter().zip(&k) {
            if kj != 0 {
                lambda[j] += &t * Rat::from_integer(BigInt::from(kj));
            }
        }
        live.retain(|&j| {
            let done = lambda[j].abs().is_one();
            if done {
                frozen[j] = Some(if lambda[j].is_positive() { Sign::Plus } else { Sign::Minus });
            }
            !done
        });
    }
    let rounded = live.len();
    let mut signs: Vec<Sign> = frozen
        .iter()
        .zip(&lambda)
        .map(|(f, l)| f.unwrap_or(if l.is_negative() { Sign::Minus } else { Sign::Plus }))
        .collect();

    let mut x = LatticeVector::zeros(n);
    for (v, s) in vs.iter().zip(&signs) {
        x.add_assign_scaled(v, s.value());
    }
    if x.norm_inf() > n as i64 {
        return Err(Error::ConstructionFailed(format!("rounded sum {x} exceeds {n} in some coordinate")));
    }
    descend(vs, &mut signs, &mut x);
    Ok(PartialColoring { signs, sum: x, rounded, kernel_steps: steps })
}

fn key(x: &[i64]) -> (i64, usize) {
    let m = x.iter().map(|c| c.abs()).max().unwrap_or(0);
    (m, x.iter().filter(|c| c.abs() == m).count())
}

fn descend(vs: &[LatticeVector], signs: &mut [Sign], x: &mut LatticeVector) {
    let mut cur = key(x.coords());
    let mut trial = x.coords().to_vec();
    loop {
        let mut improved = false;
        for (j, v) in vs.iter().enumerate() {
            let e = signs[j].value();
            for (t, (xi, vi)) in trial.iter_mut().zip(x.coords().iter().zip(v.coords())) {
                *t = xi - 2 * e * vi;
            }
            let k = key(&trial);
            if k < cur {
                cur = k;
                signs[j] = signs[j].flip();
                x.add_assign_scaled(v, -2 * e);
                improved = true;
            }
        }
        if !improved {
            return;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::balance::middle::middle_layer;

    #[test]
    fn trivial_inputs() {
        let v = LatticeVector::new(vec![1, -1, 1, -1]);
        let c = partial_color(std::slice::from_ref(&v)).unwrap();
        assert_eq!(c.sum.norm_inf(), 1);
        let c = partial_color(&[v.clone(), -&v]).unwrap();
        assert!(c.sum.is_zero());
        assert!(partial_color(&[]).is_err());
        assert!(partial_color(&[LatticeVector::new(vec![2, 0])]).is_err());
    }

    #[test]
    fn middle_layer_bound() {
        for n in [4usize, 6, 8, 10, 12] {
            let vs = middle_layer(n).unwrap().members().to_vec();
            let c = partial_color(&vs).unwrap();
            let mut x = LatticeVector::zeros(n);
            for (v, s) in vs.iter().zip(&c.signs) {
                x.add_assign_scaled(v, s.value());
            }
            assert_eq!(x, c.sum);
            assert!(x.norm_inf() <= n as i64);
            assert!(c.rounded <= n);
        }
    }
}
