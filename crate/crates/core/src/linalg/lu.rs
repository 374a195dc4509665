use super::matrix::Matrix;

/// Determinant as `sign · exp(log_abs)`; `sign == 0` for an exactly singular
/// elimination.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Determinant {
    pub sign: i8,
    pub log_abs: f64,
}

impl Determinant {
    pub fn value(&self) -> f64 {
        if self.sign == 0 {
            0.0
        } else {
            f64::from(self.sign) * self.log_abs.exp()
        }
    }
}

/// Determinant by Gaussian elimination with partial pivoting, kept in
/// sign/log form so large pencils do not overflow.
pub fn determinant(m: &Matrix) -> Determinant {
    let n = m.dim();
    let mut a = m.clone();
    let mut sign: i8 = 1;
    let mut log_abs = 0.0;
    for k in 0..n {
        let pivot_row = (k..n)
            .max_by(|&i, &j| a[(i, k)].abs().total_cmp(&a[(j, k)].abs()))
            .expect("non-empty pivot range");
        let pivot = a[(pivot_row, k)];
        if pivot == 0.0 {
            return Determinant {
                sign: 0,
                log_abs: f64::NEG_INFINITY,
            };
        }
        if pivot_row != k {
            for j in 0..n {
                let tmp = a[(k, j)];
                a[(k, j)] = a[(pivot_row, j)];
                a[(pivot_row, j)] = tmp;
            }
            sign = -sign;
        }
        if pivot < 0.0 {
            sign = -sign;
        }
        log_abs += pivot.abs().ln();
        for i in (k + 1)..n {
            let factor = a[(i, k)] / pivot;
            if factor == 0.0 {
                continue;
            }
            for j in k..n {
                a[(i, j)] -= factor * a[(k, j)];
            }
        }
    }
    Determinant { sign, log_abs }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_determinants() {
        let m = Matrix::from_rows(&[vec![0.0, 1.0], vec![1.0, -3.0]]).unwrap();
        assert_eq!(determinant(&m).value(), -1.0);
        let m = Matrix::from_rows(&[vec![-1.0, 1.0], vec![1.0, -1.0]]).unwrap();
        assert_eq!(determinant(&m).sign, 0);
        let m = Matrix::from_rows(&[
            vec![2.0, 0.0, 1.0],
            vec![1.0, 3.0, 2.0],
            vec![1.0, 1.0, 1.0],
        ])
        .unwrap();
        // 2(3-2) - 0 + 1(1-3) = 0
        assert!(determinant(&m).value().abs() < 1e-15);
        let m = Matrix::from_diagonal(&[1e200, 1e200, -1e200]);
        let d = determinant(&m);
        assert_eq!(d.sign, -1);
        assert!((d.log_abs - 600.0 * 10f64.ln()).abs() < 1e-9);
    }
}
