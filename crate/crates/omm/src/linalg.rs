//! Small dense complex linear solves by LU with partial pivoting.
//!
//! Sized for the 8x8 sideband system; no external linear-algebra dependency.

use num_complex::Complex64;

/// The pivot search found no usable pivot; the matrix is singular to
/// working precision.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SingularMatrix;

/// Solve `a x = b` in place by Gaussian elimination with partial pivoting.
/// `a` and `b` are destroyed; the solution lands in `b`.
#[allow(clippy::needless_range_loop)]
pub fn solve_in_place<const N: usize>(
    a: &mut [[Complex64; N]; N],
    b: &mut [Complex64; N],
) -> Result<(), SingularMatrix> {
    for col in 0..N {
        // pivot: largest remaining magnitude in this column
        let mut pivot = col;
        let mut best = a[col][col].norm_sqr();
        for row in (col + 1)..N {
            let mag = a[row][col].norm_sqr();
            if mag > best {
                best = mag;
                pivot = row;
            }
        }
        if best == 0.0 {
            return Err(SingularMatrix);
        }
        if pivot != col {
            a.swap(pivot, col);
            b.swap(pivot, col);
        }

        let inv = Complex64::new(1.0, 0.0) / a[col][col];
        for row in (col + 1)..N {
            let factor = a[row][col] * inv;
            if factor == Complex64::ZERO {
                continue;
            }
            a[row][col] = Complex64::ZERO;
            for k in (col + 1)..N {
                let sub = factor * a[col][k];
                a[row][k] -= sub;
            }
            b[row] -= factor * b[col];
        }
    }

    // back substitution
    for col in (0..N).rev() {
        let mut acc = b[col];
        for k in (col + 1)..N {
            acc -= a[col][k] * b[k];
        }
        b[col] = acc / a[col][col];
    }
    Ok(())
}

/// Relative residual ||a x - b|| / ||b|| (2-norms). Returns the absolute
/// residual when b = 0.
pub fn relative_residual<const N: usize>(
    a: &[[Complex64; N]; N],
    x: &[Complex64; N],
    b: &[Complex64; N],
) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for row in 0..N {
        let mut acc = -b[row];
        for col in 0..N {
            acc += a[row][col] * x[col];
        }
        num += acc.norm_sqr();
        den += b[row].norm_sqr();
    }
    if den > 0.0 {
        (num / den).sqrt()
    } else {
        num.sqrt()
    }
}
