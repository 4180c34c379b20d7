//! Integer lattices: discriminants, embeddings, torsion of quotients,
//! orthogonal complements and saturations.
//!
//! A lattice is a free Z-module with a non-degenerate integer-valued
//! symmetric bilinear form; indefinite forms are fully supported. An
//! embedding is a sublattice presented by integer coordinate rows in the
//! target's basis, with the form pulled back.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::FactoredInteger;
use crate::linalg::ExactMatrix;
use crate::symform::{GramMatrix, GramMatrixFile};

/// A non-degenerate integer lattice, presented by its Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    gram: GramMatrix,
}

impl Lattice {
    pub fn new(gram: GramMatrix) -> Result<Self> {
        if !gram.matrix().has_integer_entries() {
            return Err(Error::domain(
                "lattice Gram matrix must have integer entries".to_string(),
            ));
        }
        if gram.det()?.is_zero() {
            return Err(Error::Degenerate(
                "lattice form has zero determinant".to_string(),
            ));
        }
        Ok(Lattice { gram })
    }

    pub fn from_int_rows(rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(GramMatrix::from_int_rows(rows)?)
    }

    /// The standard rank-2 unimodular lattice with Gram [[0,1],[1,0]].
    pub fn hyperbolic_plane() -> Self {
        Lattice {
            gram: GramMatrix::from_int_rows(&[vec![0, 1], vec![1, 0]]).expect("valid"),
        }
    }

    /// Z^n with the identity form.
    pub fn standard(n: usize) -> Self {
        Lattice {
            gram: GramMatrix::identity(n),
        }
    }

    pub fn rank(&self) -> usize {
        self.gram.size()
    }

    pub fn gram(&self) -> &GramMatrix {
        &self.gram
    }

    /// `|det Gram|` in factored form.
    pub fn discriminant(&self) -> Result<FactoredInteger> {
        let det = self.gram.det()?;
        Ok(FactoredInteger::from_bigint(det.numer())?.abs())
    }

    pub fn is_unimodular(&self) -> Result<bool> {
        Ok(self.discriminant()?.is_one())
    }

    /// The identity embedding of the lattice into itself.
    pub fn full_embedding(&self) -> Embedding {
        Embedding {
            target: self.clone(),
            basis: ExactMatrix::identity(self.rank()),
        }
    }
}

/// A finite-rank sublattice `L` of a target lattice `M`: each row of
/// `basis` expresses one basis vector of `L` in `M`'s basis. Rows are
/// required to be linearly independent; the form on `L` is the pullback
/// `B * Gram(M) * B^T`.
#[derive(Clone, Debug)]
pub struct Embedding {
    target: Lattice,
    basis: ExactMatrix,
}

impl Embedding {
    pub fn new(target: Lattice, basis: ExactMatrix) -> Result<Self> {
        if basis.cols() != target.rank() {
            return Err(Error::shape(format!(
                "basis rows of length {} in a rank-{} target",
                basis.cols(),
                target.rank()
            )));
        }
        if !basis.has_integer_entries() {
            return Err(Error::domain(
                "embedding basis must have integer entries".to_string(),
            ));
        }
        if basis.rank()? != basis.rows() {
            return Err(Error::Degenerate(
                "embedding basis rows are linearly dependent".to_string(),
            ));
        }
        Ok(Embedding { target, basis })
    }

    pub fn from_int_rows(target: Lattice, rows: &[Vec<i64>]) -> Result<Self> {
        let cols = target.rank();
        let basis = if rows.is_empty() {
            ExactMatrix::zero(0, cols)
        } else {
            ExactMatrix::from_int_rows(rows)?
        };
        Self::new(target, basis)
    }

    pub fn target(&self) -> &Lattice {
        &self.target
    }

    pub fn basis(&self) -> &ExactMatrix {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    /// Pullback Gram matrix `B * Gram(M) * B^T`; may be degenerate.
    pub fn sublattice_gram(&self) -> GramMatrix {
        let m = self
            .basis
            .mul(self.target.gram.matrix())
            .and_then(|bm| bm.mul(&self.basis.transpose()))
            .expect("shape-checked at construction");
        GramMatrix::new(m).expect("pullback of a symmetric form is symmetric")
    }

    /// The sublattice as a lattice in its own right (errors if degenerate).
    pub fn sublattice(&self) -> Result<Lattice> {
        Lattice::new(self.sublattice_gram())
    }

    /// Discriminant of the sublattice; 1 for the rank-zero sublattice.
    pub fn sublattice_discriminant(&self) -> Result<FactoredInteger> {
        let det = self.sublattice_gram().det()?;
        if det.is_zero() {
            return Err(Error::Degenerate("degenerate sublattice".to_string()));
        }
        Ok(FactoredInteger::from_bigint(det.numer())?.abs())
    }

    /// Order of the torsion part of `M / L`: the product of the invariant
    /// factors of the coordinate matrix. Equals the index `|M : L|` when the
    /// ranks match.
    pub fn quotient_torsion(&self) -> Result<FactoredInteger> {
        let snf = self.basis.smith_normal_form()?;
        FactoredInteger::from_bigint(&snf.factor_product())
    }

    /// The orthogonal complement `L^perp` in `M`: the integer kernel of
    /// `B * Gram(M)`.
    pub fn orthogonal_complement(&self) -> Result<Embedding> {
        let a = self.basis.mul(self.target.gram.matrix())?;
        let kernel = a.integer_kernel()?;
        Embedding::new(self.target.clone(), kernel)
    }

    /// The double complement `L^perp^perp`, i.e. the saturation of `L`:
    /// the smallest primitively embedded overlattice.
    pub fn double_complement(&self) -> Result<Embedding> {
        let saturated = self.basis.saturate_rows()?;
        Embedding::new(self.target.clone(), saturated)
    }

    /// A primitive embedding is one with torsion-free quotient.
    pub fn is_primitive(&self) -> Result<bool> {
        Ok(self.quotient_torsion()?.is_one())
    }

    pub fn to_file(&self) -> EmbeddingFile {
        EmbeddingFile {
            target_gram: self.target.gram.to_file(),
            basis_rows: (0..self.basis.rows())
                .map(|i| {
                    self.basis
                        .row(i)
                        .iter()
                        .map(|x| {
                            i64::try_from(x.numer()).expect("embedding rows fit in 64 bits")
                        })
                        .collect()
                })
                .collect(),
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let file: EmbeddingFile = serde_json::from_str(s)?;
        (&file).try_into()
    }

    pub fn from_json_file(path: &std::path::Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

/// JSON form of an [`Embedding`]:
/// `{"target_gram": {...}, "basis_rows": [[ints], ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EmbeddingFile {
    pub target_gram: GramMatrixFile,
    pub basis_rows: Vec<Vec<i64>>,
}

impl TryFrom<&EmbeddingFile> for Embedding {
    type Error = Error;

    fn try_from(f: &EmbeddingFile) -> Result<Embedding> {
        let gram: GramMatrix = (&f.target_gram).try_into()?;
        let target = Lattice::new(gram)?;
        Embedding::from_int_rows(target, &f.basis_rows)
    }
}

/// `discr(L^perp) = discr(L^perp^perp) = discr(L) / n^2` for an embedding
/// into a unimodular lattice with torsion order `n`. Errors if `n^2` does
/// not divide the discriminant, which signals inconsistent inputs.
pub fn complement_discriminant(
    discr_l: &FactoredInteger,
    torsion: &FactoredInteger,
) -> Result<FactoredInteger> {
    let square = torsion.pow(2);
    if !square.divides(discr_l) {
        return Err(Error::domain(format!(
            "torsion squared ({square}) does not divide the discriminant ({discr_l})"
        )));
    }
    Ok(discr_l.clone() / square)
}
