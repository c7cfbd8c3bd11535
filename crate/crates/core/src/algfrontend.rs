//! Algebra-facing wrappers.
//!
//! A skew polynomial algebra with relations `x_i x_j = zeta^{m_ij} x_j x_i`
//! is carried by its exponent matrix; the root of unity `zeta` itself never
//! appears. Graded algebra isomorphism is matrix isomorphism, equivalence of
//! graded module categories is switching equivalence, and isomorphism of point
//! varieties is isomorphism of point simplicial complexes.

use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::pointcomplex::{self, SimplicialComplex};
use crate::skewmat::{isomorphic, switching_equivalent, AltMatrix, EquivWitness};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SkewAlgebraSpec {
    matrix: AltMatrix,
}

impl SkewAlgebraSpec {
    pub fn new(matrix: AltMatrix) -> Self {
        Self { matrix }
    }

    /// `exponents[i][j]` is the power of `zeta` in the relation for `x_i, x_j`.
    pub fn from_exponents<R: AsRef<[i64]>>(modulus: u32, exponents: &[R]) -> Result<Self> {
        Ok(Self::new(AltMatrix::new(modulus, exponents)?))
    }

    pub fn matrix(&self) -> &AltMatrix {
        &self.matrix
    }

    pub fn modulus(&self) -> u32 {
        self.matrix.modulus()
    }

    /// Number of generators.
    pub fn size(&self) -> usize {
        self.matrix.size()
    }

    /// `true` when `x_i` commutes with every generator.
    pub fn is_central(&self, i: usize) -> bool {
        i < self.size() && self.matrix.row(i).iter().all(|&x| x == 0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassificationReport {
    pub algebra_isomorphic: Option<Permutation>,
    pub grmod_equivalent: Option<EquivWitness>,
    pub complexes_isomorphic: Option<Permutation>,
    pub facets: (SimplicialComplex, SimplicialComplex),
    /// Dimensions of the two point varieties.
    pub dimensions: (usize, usize),
    /// Set when the verdicts follow from the generator counts alone.
    pub note: Option<String>,
}

/// Answer the three classification questions for a pair of algebras.
pub fn classify_pair(a: &SkewAlgebraSpec, b: &SkewAlgebraSpec) -> Result<ClassificationReport> {
    if a.modulus() != b.modulus() {
        return Err(Error::ModulusMismatch(a.modulus(), b.modulus()));
    }
    let fa = pointcomplex::facets(&a.matrix)?;
    let fb = pointcomplex::facets(&b.matrix)?;
    let dimensions = (fa.dimension(), fb.dimension());
    if a.size() != b.size() {
        return Ok(ClassificationReport {
            algebra_isomorphic: None,
            grmod_equivalent: None,
            complexes_isomorphic: None,
            facets: (fa, fb),
            dimensions,
            note: Some(format!(
                "different numbers of generators ({} vs {}): graded module categories are not equivalent",
                a.size(),
                b.size()
            )),
        });
    }
    let algebra_isomorphic = isomorphic(&a.matrix, &b.matrix)?;
    let grmod_equivalent = switching_equivalent(&a.matrix, &b.matrix)?;
    let complexes_isomorphic = pointcomplex::complexes_isomorphic(&fa, &fb);
    assert!(
        algebra_isomorphic.is_none() || grmod_equivalent.is_some(),
        "isomorphic algebras must have equivalent module categories"
    );
    assert!(
        grmod_equivalent.is_none() || complexes_isomorphic.is_some(),
        "equivalent module categories must have isomorphic point varieties"
    );
    Ok(ClassificationReport {
        algebra_isomorphic,
        grmod_equivalent,
        complexes_isomorphic,
        facets: (fa, fb),
        dimensions,
        note: None,
    })
}

/// Rescaling data of a witness: `(i, a_i)` with `lambda_i = zeta^{a_i}`, so that
/// the target relation for `x_{sigma(i)}, x_{sigma(j)}` has exponent
/// `m_ij - a_i + a_j`.
pub fn grmod_witness_as_lambdas(witness: &EquivWitness) -> Vec<(usize, u32)> {
    witness.exponents.values().iter().copied().enumerate().collect()
}

/// The equivalent algebra in which `x_i` is central.
pub fn central_variable_form(a: &SkewAlgebraSpec, i: usize) -> Result<SkewAlgebraSpec> {
    Ok(SkewAlgebraSpec::new(a.matrix.isolate(i)?))
}
