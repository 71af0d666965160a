use num_complex::Complex64;

use super::{ComplexMatrix, LinalgError};

/// Largest dimension accepted by [`permanent`].
pub const MAX_PERMANENT_DIM: usize = 8;

/// Permanent `Σ_σ Π_i K[i, σ(i)]`, evaluated with Ryser's inclusion-exclusion
/// formula over column subsets visited in Gray-code order.
pub fn permanent(k: &ComplexMatrix) -> Result<Complex64, LinalgError> {
    if !k.is_square() {
        return Err(LinalgError::NotSquare {
            rows: k.rows(),
            cols: k.cols(),
        });
    }
    let n = k.rows();
    if n > MAX_PERMANENT_DIM {
        return Err(LinalgError::DimensionTooLarge {
            dim: n,
            max: MAX_PERMANENT_DIM,
        });
    }
    Ok(ryser(k))
}

fn ryser(k: &ComplexMatrix) -> Complex64 {
    let n = k.rows();
    let mut row_sums = vec![Complex64::new(0.0, 0.0); n];
    let mut total = Complex64::new(0.0, 0.0);
    let mut subset: u32 = 0;
    for step in 1u32..(1u32 << n) {
        // Gray code flips exactly one column per step
        let col = step.trailing_zeros() as usize;
        let bit = 1u32 << col;
        let sign = if subset & bit == 0 { 1.0 } else { -1.0 };
        subset ^= bit;
        for (i, s) in row_sums.iter_mut().enumerate() {
            *s += k[(i, col)] * sign;
        }
        let prod: Complex64 = row_sums.iter().product();
        if (n - subset.count_ones() as usize).is_multiple_of(2) {
            total += prod;
        } else {
            total -= prod;
        }
    }
    if n == 0 {
        Complex64::new(1.0, 0.0)
    } else {
        total
    }
}
