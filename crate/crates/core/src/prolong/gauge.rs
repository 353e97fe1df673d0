use super::pfaffian::curvature;
use crate::catalog::SystemSpec;
use crate::error::{Error, Result};
use crate::exterior::{FormExpr, MatrixForm, StructureTable};
use crate::scalar::{Coeff, Monomial, RelationSet, Scalar, Symbol};

/// An invertible matrix of scalar functions with a given inverse.
///
/// Entries are kept in normal form under `relations`, so eliminated symbols
/// never reach `d`.
#[derive(Clone, Debug)]
pub struct GaugeMatrix {
    pub a: MatrixForm,
    pub inverse: MatrixForm,
    pub relations: RelationSet,
    pub coordinates: Vec<Symbol>,
    pub constants: Vec<Symbol>,
}

fn sym(name: &str) -> Scalar {
    Scalar::var(name)
}

impl GaugeMatrix {
    /// Checks `A·A⁻¹ = I` after normalization.
    pub fn new(
        a: MatrixForm,
        inverse: MatrixForm,
        relations: RelationSet,
        coordinates: Vec<Symbol>,
        constants: Vec<Symbol>,
    ) -> Result<Self> {
        if !a.is_square() || a.rows() != inverse.rows() || a.cols() != inverse.cols() {
            return Err(Error::DimensionMismatch(format!(
                "gauge matrix is {}x{} but its inverse is {}x{}",
                a.rows(),
                a.cols(),
                inverse.rows(),
                inverse.cols()
            )));
        }
        a.expect_degree(0, "gauge entry")?;
        inverse.expect_degree(0, "gauge entry")?;
        let a = a.normalize(&relations);
        let inverse = inverse.normalize(&relations);
        let prod = a.wedge(&inverse)?.normalize(&relations);
        if prod != MatrixForm::identity(a.rows()) {
            return Err(Error::RelationMissing(format!(
                "A times its inverse normalizes to {} under relations [{}]",
                prod, relations
            )));
        }
        Ok(GaugeMatrix { a, inverse, relations, coordinates, constants })
    }

    pub fn identity(n: usize) -> Self {
        let i = MatrixForm::identity(n);
        GaugeMatrix { a: i.clone(), inverse: i, relations: RelationSet::empty(), coordinates: vec![], constants: vec![] }
    }

    /// `diag(lam, lam⁻¹)` with a constant `lam`.
    pub fn diagonal(lam: &str) -> Self {
        let l = sym(lam);
        let li = l.inv_monomial().expect("a symbol is a monomial");
        let a = MatrixForm::from_scalars(2, 2, vec![l.clone(), Scalar::zero(), Scalar::zero(), li.clone()])
            .expect("2x2");
        let inverse = MatrixForm::from_scalars(2, 2, vec![li, Scalar::zero(), Scalar::zero(), l]).expect("2x2");
        GaugeMatrix { a, inverse, relations: RelationSet::empty(), coordinates: vec![], constants: vec![Symbol::new(lam)] }
    }

    /// General unimodular 2×2 matrix `[[g11, g12], [g21, g22]]`, with `g22`
    /// eliminated through `g11 g22 − g12 g21 = 1`.
    pub fn symbolic2() -> Result<Self> {
        Self::symbolic2_with(true)
    }

    /// As [`GaugeMatrix::symbolic2`], optionally without the determinant
    /// relation (which then fails the inverse check).
    pub fn symbolic2_with(det_relation: bool) -> Result<Self> {
        let g = |n: &str| sym(n);
        let g11_inv = g("g11").inv_monomial().expect("monomial");
        let rhs = &g11_inv + &(&(&g11_inv * &g("g12")) * &g("g21"));
        let relations = if det_relation {
            RelationSet::new(vec![RelationSet::rule(Monomial::var(Symbol::new("g22"), 1), rhs)])?
        } else {
            RelationSet::empty()
        };
        let a = MatrixForm::from_scalars(2, 2, vec![g("g11"), g("g12"), g("g21"), g("g22")])?;
        let adj = MatrixForm::from_scalars(2, 2, vec![g("g22"), -&g("g12"), -&g("g21"), g("g11")])?;
        let coords = ["g11", "g12", "g21", "g22"].iter().map(|s| Symbol::new(s)).collect();
        GaugeMatrix::new(a, adj, relations, coords, vec![])
    }

    fn table(&self, base: &StructureTable) -> StructureTable {
        let mut t = base.clone();
        for c in &self.coordinates {
            t.add_coordinate(c.name());
        }
        for c in &self.constants {
            t.add_constant(c.name());
        }
        t
    }
}

/// Gauge-transformed connection and the covariance comparison of its
/// curvature.
#[derive(Clone, Debug)]
pub struct GaugeResult {
    /// `dA·A⁻¹ + AΩA⁻¹`.
    pub omega: MatrixForm,
    /// `dΩ' − Ω'∧Ω'`.
    pub theta: MatrixForm,
    /// `AΘA⁻¹`.
    pub expected: MatrixForm,
}

impl GaugeResult {
    pub fn covariant(&self) -> bool {
        self.theta == self.expected
    }

    pub fn difference(&self) -> Result<MatrixForm> {
        self.theta.sub(&self.expected)
    }
}

pub fn gauge_transform(sys: &SystemSpec, g: &GaugeMatrix) -> Result<GaugeResult> {
    if g.a.rows() != sys.dim {
        return Err(Error::DimensionMismatch(format!(
            "gauge matrix is {}x{} but the system is {}x{}",
            g.a.rows(),
            g.a.rows(),
            sys.dim,
            sys.dim
        )));
    }
    let t = g.table(&sys.table);
    let rel = &g.relations;
    let da = g.a.d(&t)?.normalize(rel);
    let omega = da
        .wedge(&g.inverse)?
        .add(&g.a.wedge(&sys.connection)?.wedge(&g.inverse)?)?
        .normalize(rel);
    let theta = curvature(&omega, &t)?.normalize(rel);
    let expected = g.a.wedge(&sys.theta_matrix)?.wedge(&g.inverse)?.normalize(rel);
    Ok(GaugeResult { omega, theta, expected })
}

/// Scale a constant matrix of coefficients into a gauge matrix.
pub fn constant_gauge(rows: &[Vec<Coeff>], inverse: &[Vec<Coeff>]) -> Result<GaugeMatrix> {
    let to = |m: &[Vec<Coeff>]| {
        MatrixForm::from_rows(
            m.iter()
                .map(|r| r.iter().map(|c| FormExpr::scalar(Scalar::constant(c.clone()))).collect())
                .collect(),
        )
    };
    GaugeMatrix::new(to(rows)?, to(inverse)?, RelationSet::empty(), vec![], vec![])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{load_system, parse_form};

    #[test]
    fn symbolic_gauge_is_covariant() {
        let s = load_system("sl2r").unwrap();
        let r = gauge_transform(&s, &GaugeMatrix::symbolic2().unwrap()).unwrap();
        assert!(r.covariant(), "{}", r.difference().unwrap());
        assert!(!r.omega.to_string().contains("g22"));
    }

    #[test]
    fn diagonal_gauge() {
        let s = load_system("sl2r").unwrap();
        let r = gauge_transform(&s, &GaugeMatrix::diagonal("lam")).unwrap();
        assert!(r.covariant());
        assert_eq!(r.omega.get(0, 1), &parse_form("lam^2*w2").unwrap());
        assert_eq!(r.omega.get(1, 0), &parse_form("lam^-2*w3").unwrap());
    }

    #[test]
    fn identity_gauge_is_trivial() {
        let s = load_system("o3").unwrap();
        let r = gauge_transform(&s, &GaugeMatrix::identity(3)).unwrap();
        assert_eq!(r.omega, s.connection);
        assert_eq!(r.theta, s.theta_matrix);
    }

    #[test]
    fn missing_relation_is_reported() {
        assert!(matches!(GaugeMatrix::symbolic2_with(false), Err(Error::RelationMissing(_))));
    }

    #[test]
    fn size_mismatch() {
        let s = load_system("o3").unwrap();
        assert!(matches!(gauge_transform(&s, &GaugeMatrix::diagonal("lam")), Err(Error::DimensionMismatch(_))));
    }
}
