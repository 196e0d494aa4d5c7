//! Bordered-determinant ratio and 2x2 block inverse formulas.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::RationalMatrix;
use crate::Rational;

/// `S - w^t M^{-1} w`, which equals `det T / det M` for the bordered matrix
/// `T = [[M, w], [w^t, S]]`.
pub fn schur_ratio(m: &RationalMatrix, w: &RationalMatrix, s: &Rational) -> Result<Rational> {
    if !m.is_square() {
        return Err(Error::NotSquare(m.rows(), m.cols()));
    }
    if w.shape() != (m.rows(), 1) {
        return Err(Error::ShapeMismatch {
            op: "schur_ratio",
            left: m.shape(),
            right: w.shape(),
        });
    }
    let inv = m.inverse_named("M")?;
    let quad = w.transpose().mul(&inv)?.mul(w)?;
    Ok(s - &quad[(0, 0)])
}

/// Per-block agreement of the block inverse formulas with a direct inverse.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockInverseReport {
    pub n11: bool,
    pub n12: bool,
    pub n21: bool,
    pub n22: bool,
}

impl BlockInverseReport {
    pub fn all(&self) -> bool {
        self.n11 && self.n12 && self.n21 && self.n22
    }
}

/// With `N = M^{-1}` split conformally:
/// `N11 = (M11 - M12 M22^{-1} M21)^{-1}`, `N22 = (M22 - M21 M11^{-1} M12)^{-1}`,
/// `N12 = -M11^{-1} M12 N22`, `N21 = -M22^{-1} M21 N11`.
pub fn block_inverse_identities(
    m11: &RationalMatrix,
    m12: &RationalMatrix,
    m21: &RationalMatrix,
    m22: &RationalMatrix,
) -> Result<BlockInverseReport> {
    let (p, q) = (m11.rows(), m22.rows());
    if !m11.is_square() || !m22.is_square() || m12.shape() != (p, q) || m21.shape() != (q, p) {
        return Err(Error::ShapeMismatch {
            op: "block_inverse_identities",
            left: m11.shape(),
            right: m22.shape(),
        });
    }
    let full = assemble_blocks(m11, m12, m21, m22);
    let direct = full.inverse_named("full block matrix")?;
    let m11_inv = m11.inverse_named("M11")?;
    let m22_inv = m22.inverse_named("M22")?;
    let schur11 = m11.sub(&m12.mul(&m22_inv)?.mul(m21)?)?;
    let schur22 = m22.sub(&m21.mul(&m11_inv)?.mul(m12)?)?;
    let n11 = schur11.inverse_named("M11 - M12 M22^-1 M21")?;
    let n22 = schur22.inverse_named("M22 - M21 M11^-1 M12")?;
    let n12 = m11_inv.mul(m12)?.mul(&n22)?.neg();
    let n21 = m22_inv.mul(m21)?.mul(&n11)?.neg();

    let top: Vec<usize> = (0..p).collect();
    let bottom: Vec<usize> = (p..p + q).collect();
    Ok(BlockInverseReport {
        n11: direct.submatrix(&top, &top) == n11,
        n12: direct.submatrix(&top, &bottom) == n12,
        n21: direct.submatrix(&bottom, &top) == n21,
        n22: direct.submatrix(&bottom, &bottom) == n22,
    })
}

/// `[[M11, M12], [M21, M22]]`.
pub fn assemble_blocks(
    m11: &RationalMatrix,
    m12: &RationalMatrix,
    m21: &RationalMatrix,
    m22: &RationalMatrix,
) -> RationalMatrix {
    let (p, q) = (m11.rows(), m22.rows());
    let mut full = RationalMatrix::zeros(p + q, p + q);
    for i in 0..p + q {
        for j in 0..p + q {
            full[(i, j)] = match (i < p, j < p) {
                (true, true) => m11[(i, j)].clone(),
                (true, false) => m12[(i, j - p)].clone(),
                (false, true) => m21[(i - p, j)].clone(),
                (false, false) => m22[(i - p, j - p)].clone(),
            };
        }
    }
    full
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{integer, ratio};

    #[test]
    fn schur_examples() {
        let m = RationalMatrix::from_i64_rows(&[&[2]]);
        let w = RationalMatrix::from_i64_rows(&[&[1]]);
        assert_eq!(schur_ratio(&m, &w, &integer(1)).unwrap(), ratio(1, 2));

        let zero = RationalMatrix::zeros(2, 1);
        let m2 = RationalMatrix::from_i64_rows(&[&[3, 1], &[4, 2]]);
        assert_eq!(schur_ratio(&m2, &zero, &ratio(5, 3)).unwrap(), ratio(5, 3));

        let id = RationalMatrix::identity(2);
        let ones = RationalMatrix::from_i64_rows(&[&[1], &[1]]);
        assert_eq!(schur_ratio(&id, &ones, &integer(3)).unwrap(), integer(1));

        let singular = RationalMatrix::from_i64_rows(&[&[1, 1], &[1, 1]]);
        assert!(matches!(
            schur_ratio(&singular, &ones, &integer(0)),
            Err(Error::Singular(_))
        ));
    }

    #[test]
    fn block_diagonal_inverse() {
        let m11 = RationalMatrix::from_i64_rows(&[&[2, 1], &[1, 1]]);
        let m22 = RationalMatrix::from_i64_rows(&[&[3]]);
        let r = block_inverse_identities(
            &m11,
            &RationalMatrix::zeros(2, 1),
            &RationalMatrix::zeros(1, 2),
            &m22,
        )
        .unwrap();
        assert!(r.all());
        let full = assemble_blocks(&m11, &RationalMatrix::zeros(2, 1), &RationalMatrix::zeros(1, 2), &m22);
        let inv = full.inverse().unwrap();
        assert_eq!(inv.submatrix(&[0, 1], &[0, 1]), m11.inverse().unwrap());
        assert!(inv.submatrix(&[0, 1], &[2]).is_zero());
    }

    #[test]
    fn one_by_one_split() {
        // [[a,b],[c,d]] with a=3, b=2, c=1, d=4: N11 = d/det = 4/10
        let r = |x: i64| RationalMatrix::from_i64_rows(&[&[x]]);
        let rep = block_inverse_identities(&r(3), &r(2), &r(1), &r(4)).unwrap();
        assert!(rep.all());
        let full = assemble_blocks(&r(3), &r(2), &r(1), &r(4));
        assert_eq!(full.inverse().unwrap()[(0, 0)], ratio(2, 5));
    }

    #[test]
    fn singular_block_is_named() {
        let r = |x: i64| RationalMatrix::from_i64_rows(&[&[x]]);
        let err = block_inverse_identities(&r(0), &r(1), &r(1), &r(1)).unwrap_err();
        assert_eq!(err, Error::Singular("M11".into()));
        let err = block_inverse_identities(&r(1), &r(1), &r(1), &r(1)).unwrap_err();
        assert_eq!(err, Error::Singular("full block matrix".into()));
    }
}
