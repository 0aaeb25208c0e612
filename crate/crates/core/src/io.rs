//! JSON problem files: a field, an algebra (quiver or structure constants), a permutation
//! group and its action, optional vertex idempotents, block order and search options.
//!
//! Scalars are written as strings (`"3/2"`, `"-1"`) so that values are exact.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{Algebra, Quiver};
use crate::equivariant::AlgebraAction;
use crate::error::{Error, Result};
use crate::groups::{FiniteGroup, Perm};
use crate::linalg::Matrix;
use crate::modules::ModuleRep;
use crate::options::Options;
use crate::scalars::{Field, Scalar};
use crate::theorems::{wreath_build, ExceptionalSetup};

/// `"Q"` or `{"Fp": p}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FieldSpec {
    Named(String),
    Prime {
        #[serde(rename = "Fp")]
        fp: u64,
    },
}

impl FieldSpec {
    pub fn field(&self) -> Result<Field> {
        match self {
            FieldSpec::Named(s) => Field::from_descriptor(s),
            FieldSpec::Prime { fp } => Field::prime(*fp),
        }
    }
}

impl From<Field> for FieldSpec {
    fn from(f: Field) -> FieldSpec {
        match f {
            Field::Rationals => FieldSpec::Named("Q".into()),
            Field::Prime(p) => FieldSpec::Prime { fp: p },
        }
    }
}

/// `b_i b_j = Σ c_k b_k` written as `[i, j, [[k, "c"], …]]`; omitted products are zero.
pub type ProductEntry = (usize, usize, Vec<(usize, String)>);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureSpec {
    pub labels: Vec<String>,
    pub unit: Vec<String>,
    pub products: Vec<ProductEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlgebraSpec {
    Quiver(Quiver),
    Structure(StructureSpec),
}

impl AlgebraSpec {
    pub fn from_algebra(a: &Algebra) -> AlgebraSpec {
        if let Some(pb) = a.path_basis() {
            return AlgebraSpec::Quiver(pb.quiver.clone());
        }
        let d = a.dim();
        let mut products = Vec::new();
        for i in 0..d {
            for j in 0..d {
                let p = a.product(i, j);
                if !p.is_empty() {
                    products.push((i, j, p.iter().map(|(k, c)| (*k, c.to_string())).collect()));
                }
            }
        }
        AlgebraSpec::Structure(StructureSpec {
            labels: a.labels().to_vec(),
            unit: a.unit().iter().map(Scalar::to_string).collect(),
            products,
        })
    }

    pub fn build(&self, field: Field) -> Result<Algebra> {
        match self {
            AlgebraSpec::Quiver(q) => Ok(Algebra::path_algebra(q, field)),
            AlgebraSpec::Structure(s) => {
                let d = s.labels.len();
                let unit = parse_vector(field, &s.unit, d, "unit")?;
                let mut table = vec![Vec::new(); d * d];
                for (i, j, terms) in &s.products {
                    if *i >= d || *j >= d {
                        return Err(Error::Parse(format!("product ({i}, {j}) is out of range")));
                    }
                    let mut entry: Vec<(usize, Scalar)> = Vec::new();
                    for (k, c) in terms {
                        if *k >= d {
                            return Err(Error::Parse(format!("product ({i}, {j}) has a term at index {k}")));
                        }
                        let c = field.parse(c).map_err(|e| Error::Parse(format!("product ({i}, {j}): {e}")))?;
                        if !c.is_zero() {
                            entry.push((*k, c));
                        }
                    }
                    entry.sort_by_key(|(k, _)| *k);
                    table[i * d + j] = entry;
                }
                Algebra::from_table(field, s.labels.clone(), table, unit)
            }
        }
    }
}

/// A named group (`"S3"`, `"C4"`, `"1"`) or permutation generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupSpec {
    Named(String),
    Permutations { degree: usize, generators: Vec<Perm> },
}

impl GroupSpec {
    pub fn build(&self) -> Result<FiniteGroup> {
        match self {
            GroupSpec::Named(name) => named_group(name),
            GroupSpec::Permutations { degree, generators } => FiniteGroup::new(*degree, generators.clone()),
        }
    }
}

pub fn named_group(name: &str) -> Result<FiniteGroup> {
    let t = name.trim();
    if t == "1" || t.eq_ignore_ascii_case("trivial") {
        return Ok(FiniteGroup::trivial());
    }
    let bad = || Error::Parse(format!("unknown group {t:?} (expected Sn, Cn or 1)"));
    let n: usize = t.get(1..).ok_or_else(bad)?.parse().map_err(|_| bad())?;
    match t.chars().next() {
        Some('S') | Some('s') => FiniteGroup::symmetric(n),
        Some('C') | Some('c') if n > 0 => Ok(FiniteGroup::cyclic(n)),
        _ => Err(bad()),
    }
}

/// Arrow images: a permutation of the arrows or a matrix of arrow coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ArrowImages {
    Permutation(Perm),
    Matrix(Vec<Vec<String>>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathGenerator {
    pub vertices: Perm,
    pub arrows: ArrowImages,
}

/// One entry per group generator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ActionSpec {
    Paths(Vec<PathGenerator>),
    /// Row `i` of each matrix is the image of basis element `i`.
    Matrices(Vec<Vec<Vec<String>>>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub field: FieldSpec,
    pub algebra: AlgebraSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<ActionSpec>,
    /// Complete orthogonal idempotents, required for algebras given by structure constants.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<Vec<String>>>,
    /// `S_n` permuting the factors of the `n`-th tensor power instead of `group`/`action`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wreath: Option<usize>,
    /// Orbits listed by their smallest vertex.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub block_order: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub options: Option<Options>,
}

/// Largest `n·(dim A)^n` accepted for wreath problems.
pub const WREATH_BUDGET: usize = 4096;

/// A parsed and validated problem.
#[derive(Clone, Debug)]
pub struct Problem {
    pub name: Option<String>,
    pub field: Field,
    /// The algebra as given (before any tensor power).
    pub base: Arc<Algebra>,
    pub base_vertices: Vec<Vec<Scalar>>,
    pub wreath: Option<usize>,
    pub action: Arc<AlgebraAction>,
    pub vertices: Vec<Vec<Scalar>>,
    pub block_order: Option<Vec<usize>>,
    pub options: Option<Options>,
}

impl PartialEq for Problem {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.field == other.field
            && *self.base == *other.base
            && self.base_vertices == other.base_vertices
            && self.wreath == other.wreath
            && *self.action == *other.action
            && self.vertices == other.vertices
            && self.block_order == other.block_order
            && self.options == other.options
    }
}

fn parse_vector(field: Field, v: &[String], len: usize, what: &str) -> Result<Vec<Scalar>> {
    if v.len() != len {
        return Err(Error::Parse(format!("{what}: expected {len} entries, got {}", v.len())));
    }
    v.iter().map(|s| field.parse(s).map_err(|e| Error::Parse(format!("{what}: {e}")))).collect()
}

fn parse_matrix(field: Field, rows: &[Vec<String>], n: usize, m: usize, what: &str) -> Result<Matrix> {
    if rows.len() != n {
        return Err(Error::Parse(format!("{what}: expected {n} rows, got {}", rows.len())));
    }
    let rows = rows.iter().map(|r| parse_vector(field, r, m, what)).collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(field, m, rows)
}

pub fn matrix_strings(m: &Matrix) -> Vec<Vec<String>> {
    (0..m.rows()).map(|i| m.row(i).iter().map(Scalar::to_string).collect()).collect()
}

fn context(what: &'static str) -> impl Fn(Error) -> Error {
    move |e| Error::Parse(format!("{what}: {e}"))
}

impl ProblemSpec {
    pub fn from_json(text: &str) -> Result<ProblemSpec> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("problem specs serialize")
    }

    /// Builds the domain objects; `field` overrides the field named in the file.
    pub fn build(&self, field: Option<Field>) -> Result<Problem> {
        let field = match field {
            Some(f) => f,
            None => self.field.field().map_err(context("field"))?,
        };
        let base = Arc::new(self.algebra.build(field).map_err(context("algebra"))?);
        let base_vertices = match (&self.vertices, base.path_basis()) {
            (Some(v), _) => v
                .iter()
                .map(|e| parse_vector(field, e, base.dim(), "vertices"))
                .collect::<Result<Vec<_>>>()?,
            (None, Some(pb)) => (0..pb.quiver.vertex_count()).map(|v| base.basis(pb.vertex(v))).collect(),
            (None, None) => vec![base.unit().to_vec()],
        };
        let (action, vertices, block_order) = if let Some(n) = self.wreath {
            if self.group.is_some() || self.action.is_some() {
                return Err(Error::Parse("wreath problems take no group or action".into()));
            }
            let setup = wreath_build(&base, &base_vertices, n, WREATH_BUDGET).map_err(context("wreath"))?;
            let order = self.block_order.clone().or_else(|| Some(setup.blocks.iter().map(|b| b.representative).collect()));
            (setup.action, setup.idempotents, order)
        } else {
            let group = Arc::new(match &self.group {
                Some(g) => g.build().map_err(context("group"))?,
                None => FiniteGroup::trivial(),
            });
            let p = field.characteristic();
            if p > 0 && (group.order() as u64).is_multiple_of(p) {
                return Err(Error::Parse(format!(
                    "group: {}",
                    Error::CharacteristicDividesOrder { characteristic: p, order: group.order() }
                )));
            }
            let action = match &self.action {
                None => AlgebraAction::trivial(group, base.clone()),
                Some(ActionSpec::Matrices(ms)) => {
                    let d = base.dim();
                    let mats = ms.iter().map(|m| parse_matrix(field, m, d, d, "action")).collect::<Result<Vec<_>>>()?;
                    AlgebraAction::new(group, base.clone(), mats).map_err(context("action"))?
                }
                Some(ActionSpec::Paths(gens)) => {
                    let m = base.path_basis().ok_or_else(|| Error::Parse("action: paths form needs a quiver".into()))?.quiver.arrows().len();
                    let gens = gens
                        .iter()
                        .map(|g| {
                            let am = match &g.arrows {
                                ArrowImages::Permutation(p) => {
                                    crate::groups::validate_perm(p, m).map_err(context("action"))?;
                                    Matrix::permutation(field, p)
                                }
                                ArrowImages::Matrix(rows) => parse_matrix(field, rows, m, m, "action")?,
                            };
                            Ok((g.vertices.clone(), am))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    AlgebraAction::linear_on_arrows(group, base.clone(), &gens).map_err(context("action"))?
                }
            };
            (Arc::new(action), base_vertices.clone(), self.block_order.clone())
        };
        Ok(Problem {
            name: self.name.clone(),
            field,
            base,
            base_vertices,
            wreath: self.wreath,
            action,
            vertices,
            block_order,
            options: self.options,
        })
    }
}

impl Problem {
    pub fn from_json(text: &str, field: Option<Field>) -> Result<Problem> {
        ProblemSpec::from_json(text)?.build(field)
    }

    pub fn setup(&self) -> Result<ExceptionalSetup> {
        ExceptionalSetup::new(self.action.clone(), self.vertices.clone(), self.block_order.clone())
    }

    /// Normal form: actions as full matrices, scalars in canonical notation.
    pub fn to_spec(&self) -> ProblemSpec {
        let vectors = |vs: &[Vec<Scalar>]| vs.iter().map(|v| v.iter().map(Scalar::to_string).collect()).collect();
        let default_vertices = match self.base.path_basis() {
            Some(pb) => (0..pb.quiver.vertex_count()).map(|v| self.base.basis(pb.vertex(v))).collect(),
            None => vec![self.base.unit().to_vec()],
        };
        let vertices = (self.base_vertices != default_vertices).then(|| vectors(&self.base_vertices));
        let (group, action, block_order) = if self.wreath.is_some() {
            (None, None, self.block_order.clone())
        } else {
            let g = self.action.group();
            let group = GroupSpec::Permutations { degree: g.degree(), generators: g.generators().to_vec() };
            let mats = g.generator_indices().iter().map(|&s| matrix_strings(self.action.map(s))).collect();
            (Some(group), Some(ActionSpec::Matrices(mats)), self.block_order.clone())
        };
        ProblemSpec {
            name: self.name.clone(),
            field: self.field.into(),
            algebra: AlgebraSpec::from_algebra(&self.base),
            group,
            action,
            vertices,
            wreath: self.wreath,
            block_order,
            options: self.options,
        }
    }
}

/// A module as one action matrix per basis element of its algebra.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleSpec {
    pub field: FieldSpec,
    pub dim: usize,
    pub action: Vec<Vec<Vec<String>>>,
}

impl ModuleSpec {
    pub fn from_module(m: &ModuleRep) -> ModuleSpec {
        ModuleSpec { field: m.field().into(), dim: m.dim(), action: m.action().iter().map(matrix_strings).collect() }
    }

    pub fn build(&self, algebra: Arc<Algebra>) -> Result<ModuleRep> {
        let field = self.field.field()?;
        if field != algebra.field() {
            return Err(Error::Parse(format!("module over {field} for an algebra over {}", algebra.field())));
        }
        let action = self
            .action
            .iter()
            .map(|m| parse_matrix(field, m, self.dim, self.dim, "module action"))
            .collect::<Result<Vec<_>>>()?;
        ModuleRep::new(algebra, action)
    }
}
