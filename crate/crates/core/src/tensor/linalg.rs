//! Dense 4×4 helpers: Laplace-expansion determinant and adjugate inverse.

use super::scalar::Scalar;

pub type Mat4<T> = [[T; 4]; 4];

/// Below this magnitude a determinant is treated as singular.
pub const SINGULAR_DET: f64 = 1e-300;

/// The six 2×2 minors of rows (0,1) and rows (2,3), indexed by column pair
/// (0,1) (0,2) (0,3) (1,2) (1,3) (2,3).
fn pair_minors<T: Scalar>(m: &Mat4<T>, r0: usize, r1: usize) -> [T; 6] {
    let d = |a: usize, b: usize| m[r0][a] * m[r1][b] - m[r0][b] * m[r1][a];
    [d(0, 1), d(0, 2), d(0, 3), d(1, 2), d(1, 3), d(2, 3)]
}

pub fn det4<T: Scalar>(m: &Mat4<T>) -> T {
    let s = pair_minors(m, 0, 1);
    let c = pair_minors(m, 2, 3);
    s[0] * c[5] - s[1] * c[4] + s[2] * c[3] + s[3] * c[2] - s[4] * c[1] + s[5] * c[0]
}

/// Adjugate and determinant; `inverse = adj / det`.
pub fn adjugate4<T: Scalar>(m: &Mat4<T>) -> (Mat4<T>, T) {
    let s = pair_minors(m, 0, 1);
    let c = pair_minors(m, 2, 3);
    let det = s[0] * c[5] - s[1] * c[4] + s[2] * c[3] + s[3] * c[2] - s[4] * c[1] + s[5] * c[0];

    let mut a = [[T::zero(); 4]; 4];
    a[0][0] = m[1][1] * c[5] - m[1][2] * c[4] + m[1][3] * c[3];
    a[0][1] = -(m[0][1] * c[5]) + m[0][2] * c[4] - m[0][3] * c[3];
    a[0][2] = m[3][1] * s[5] - m[3][2] * s[4] + m[3][3] * s[3];
    a[0][3] = -(m[2][1] * s[5]) + m[2][2] * s[4] - m[2][3] * s[3];

    a[1][0] = -(m[1][0] * c[5]) + m[1][2] * c[2] - m[1][3] * c[1];
    a[1][1] = m[0][0] * c[5] - m[0][2] * c[2] + m[0][3] * c[1];
    a[1][2] = -(m[3][0] * s[5]) + m[3][2] * s[2] - m[3][3] * s[1];
    a[1][3] = m[2][0] * s[5] - m[2][2] * s[2] + m[2][3] * s[1];

    a[2][0] = m[1][0] * c[4] - m[1][1] * c[2] + m[1][3] * c[0];
    a[2][1] = -(m[0][0] * c[4]) + m[0][1] * c[2] - m[0][3] * c[0];
    a[2][2] = m[3][0] * s[4] - m[3][1] * s[2] + m[3][3] * s[0];
    a[2][3] = -(m[2][0] * s[4]) + m[2][1] * s[2] - m[2][3] * s[0];

    a[3][0] = -(m[1][0] * c[3]) + m[1][1] * c[1] - m[1][2] * c[0];
    a[3][1] = m[0][0] * c[3] - m[0][1] * c[1] + m[0][2] * c[0];
    a[3][2] = -(m[3][0] * s[3]) + m[3][1] * s[1] - m[3][2] * s[0];
    a[3][3] = m[2][0] * s[3] - m[2][1] * s[1] + m[2][2] * s[0];
    (a, det)
}

/// Adjugate-over-determinant inverse. `None` when `|det| < SINGULAR_DET`.
pub fn invert4<T: Scalar>(m: &Mat4<T>) -> Option<(Mat4<T>, T)> {
    let (adj, det) = adjugate4(m);
    let dv = det.value();
    if !dv.is_finite() || dv.abs() < SINGULAR_DET {
        return None;
    }
    let inv = adj.map(|row| row.map(|x| x / det));
    Some((inv, det))
}

/// Leading principal minors of orders 1 through 4.
pub fn leading_minors(m: &Mat4<f64>) -> [f64; 4] {
    let m1 = m[0][0];
    let m2 = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let m3 = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    [m1, m2, m3, det4(m)]
}

pub fn matmul<T: Scalar>(a: &Mat4<T>, b: &Mat4<T>) -> Mat4<T> {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| (0..4).fold(T::zero(), |acc, k| acc + a[i][k] * b[k][j]))
    })
}

/// `max |a·b - I|` divided by `max_ij sum_k |a_ik||b_kj|`.
pub fn identity_residual(a: &Mat4<f64>, b: &Mat4<f64>) -> f64 {
    let mut worst = 0.0f64;
    let mut scale = 0.0f64;
    for i in 0..4 {
        for j in 0..4 {
            let mut acc = 0.0;
            let mut mag = 0.0;
            for k in 0..4 {
                acc += a[i][k] * b[k][j];
                mag += (a[i][k] * b[k][j]).abs();
            }
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((acc - target).abs());
            scale = scale.max(mag);
        }
    }
    if scale == 0.0 {
        worst
    } else {
        worst / scale
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(d: [f64; 4]) -> Mat4<f64> {
        std::array::from_fn(|i| std::array::from_fn(|j| if i == j { d[i] } else { 0.0 }))
    }

    // Cofactor expansion along the first row, independent of the pair-minor
    // formulas above.
    fn det_oracle(m: &Mat4<f64>) -> f64 {
        let det3 = |r: [usize; 3], c: [usize; 3]| {
            m[r[0]][c[0]] * (m[r[1]][c[1]] * m[r[2]][c[2]] - m[r[1]][c[2]] * m[r[2]][c[1]])
                - m[r[0]][c[1]] * (m[r[1]][c[0]] * m[r[2]][c[2]] - m[r[1]][c[2]] * m[r[2]][c[0]])
                + m[r[0]][c[2]] * (m[r[1]][c[0]] * m[r[2]][c[1]] - m[r[1]][c[1]] * m[r[2]][c[0]])
        };
        let mut total = 0.0;
        for j in 0..4 {
            let cols: Vec<usize> = (0..4).filter(|&c| c != j).collect();
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            total += sign * m[0][j] * det3([1, 2, 3], [cols[0], cols[1], cols[2]]);
        }
        total
    }

    #[test]
    fn identity_and_diagonal() {
        let id = diag([1.0; 4]);
        let (inv, det) = invert4(&id).unwrap();
        assert_eq!(inv, id);
        assert_eq!(det, 1.0);
        let (inv, _) = invert4(&diag([2.0, -1.0, -1.0, -1.0])).unwrap();
        assert_eq!(inv, diag([0.5, -1.0, -1.0, -1.0]));
    }

    #[test]
    fn singular_matrix_is_rejected() {
        let mut m = diag([1.0, -1.0, -1.0, 0.0]);
        assert!(invert4(&m).is_none());
        m[3][3] = 1e-310;
        assert!(invert4(&m).is_none());
    }

    #[test]
    fn ansatz_determinant_is_independent_of_u_and_q() {
        // g00=u^2, g01=q, g03=v, g11=-a^2 b^2, g22=-a^2 with a=2, b=3, v=5
        for (u, q) in [(0.0, 0.0), (1.3, -0.4), (7.0, 2.5)] {
            let mut m = [[0.0; 4]; 4];
            m[0][0] = u * u;
            m[0][1] = q;
            m[1][0] = q;
            m[0][3] = 5.0;
            m[3][0] = 5.0;
            m[1][1] = -36.0;
            m[2][2] = -4.0;
            assert_eq!(det_oracle(&m), -3600.0);
            assert_eq!(det4(&m), -3600.0);
        }
    }

    #[test]
    fn inverse_of_generic_matrix() {
        let m = [
            [2.0, 0.3, -0.1, 1.2],
            [0.3, -1.5, 0.2, 0.0],
            [-0.1, 0.2, -0.7, 0.4],
            [1.2, 0.0, 0.4, 0.1],
        ];
        assert!((det4(&m) - det_oracle(&m)).abs() < 1e-14);
        let (inv, _) = invert4(&m).unwrap();
        assert!(identity_residual(&m, &inv) < 1e-15);
        assert!(identity_residual(&inv, &m) < 1e-15);
    }

    #[test]
    fn minors_of_minkowski() {
        assert_eq!(leading_minors(&diag([1.0, -1.0, -1.0, -1.0])), [1.0, -1.0, 1.0, -1.0]);
    }
}
