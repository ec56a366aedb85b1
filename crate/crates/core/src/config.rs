//! Algebra configurations and their validation.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{box_points, Alpha};
use crate::error::{Error, Result};
use crate::linalg::{self, Solution};
use crate::rational::Rational;

/// Default half-width of the witness box search.
pub const DEFAULT_SEARCH_RADIUS: i64 = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AlgebraClass {
    /// The classical Block algebra on `F[Γ]`.
    #[serde(rename = "block0")]
    Block0,
    #[serde(rename = "class_i")]
    ClassI,
    #[serde(rename = "class_ii")]
    ClassII,
    /// The superalgebra family on two copies of the Class I space.
    #[serde(rename = "class_iii")]
    ClassIII,
}

impl AlgebraClass {
    /// Number of homomorphisms the class uses.
    pub fn arity(self) -> usize {
        match self {
            AlgebraClass::ClassII => 4,
            _ => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            AlgebraClass::Block0 => "block0",
            AlgebraClass::ClassI => "class_i",
            AlgebraClass::ClassII => "class_ii",
            AlgebraClass::ClassIII => "class_iii",
        }
    }

    pub fn is_super(self) -> bool {
        self == AlgebraClass::ClassIII
    }
}

impl fmt::Display for AlgebraClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Whether a multi-index direction ranges over `N` or is pinned to zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IndexKind {
    Full,
    Zero,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Profile(Vec<IndexKind>);

impl Profile {
    pub fn new(kinds: Vec<IndexKind>) -> Self {
        Profile(kinds)
    }

    pub fn all(kind: IndexKind, n: usize) -> Self {
        Profile(vec![kind; n])
    }

    pub fn kinds(&self) -> &[IndexKind] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_full(&self, p: usize) -> bool {
        self.0[p] == IndexKind::Full
    }

    /// True when every direction is pinned, so only pure keys exist.
    pub fn all_zero(&self) -> bool {
        self.0.iter().all(|k| *k == IndexKind::Zero)
    }
}

/// The homomorphisms `φ_p : Z^r -> Q`, one rational row each.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomomorphismFamily {
    rank: usize,
    rows: Vec<Vec<Rational>>,
    /// Integer copy of `rows` when every entry is integral.
    int_rows: Option<Vec<Vec<i64>>>,
}

impl HomomorphismFamily {
    pub fn new(rank: usize, rows: Vec<Vec<Rational>>) -> Self {
        let int_rows = rows.iter().map(|r| r.iter().map(Rational::to_i64).collect::<Option<Vec<_>>>()).collect();
        HomomorphismFamily { rank, rows, int_rows }
    }

    pub fn from_integers(rank: usize, rows: &[&[i64]]) -> Self {
        Self::new(rank, rows.iter().map(|r| r.iter().map(|&x| Rational::from_integer(x)).collect()).collect())
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    /// `φ_p(alpha)` for zero-based `p`.
    pub fn eval(&self, p: usize, alpha: &[i64]) -> Rational {
        if let Some(ints) = &self.int_rows {
            let s: i128 = ints[p].iter().zip(alpha).map(|(a, b)| *a as i128 * *b as i128).sum();
            if let Ok(v) = i64::try_from(s) {
                return Rational::from_integer(v);
            }
        }
        self.rows[p].iter().zip(alpha).map(|(a, &b)| a * &Rational::from_integer(b)).sum()
    }

    pub fn is_zero_row(&self, p: usize) -> bool {
        self.rows[p].iter().all(Rational::is_zero)
    }

    /// Rank of the stacked rows; equals `rank` iff the joint kernel is trivial.
    pub fn matrix_rank(&self) -> usize {
        linalg::rank(&self.rows, self.rank)
    }
}

/// On-disk configuration format.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub class: AlgebraClass,
    pub rank: usize,
    pub phi: Vec<Vec<Rational>>,
    pub profile: Vec<IndexKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha0: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<u8>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub degenerate_witt: bool,
}

/// A structurally consistent algebra configuration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraConfig {
    pub name: Option<String>,
    pub class: AlgebraClass,
    pub phi: HomomorphismFamily,
    pub profile: Profile,
    pub alpha0: Option<Alpha>,
    pub epsilon: Option<u8>,
    pub witnesses: Vec<Alpha>,
    /// Class I with `∂_2 = 0`: the generalized Witt algebra.
    pub degenerate_witt: bool,
}

impl AlgebraConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let file: ConfigFile =
            serde_json::from_str(text).map_err(|source| Error::Parse { what: "configuration".into(), source })?;
        Self::from_file(file)
    }

    pub fn from_file(file: ConfigFile) -> Result<Self> {
        let class = file.class;
        let n = class.arity();
        let r = file.rank;
        let bad = |msg: String| Err(Error::Structure(msg));
        if file.phi.len() != n {
            return bad(format!("{class} needs {n} homomorphism rows, found {}", file.phi.len()));
        }
        if let Some(p) = file.phi.iter().position(|row| row.len() != r) {
            return bad(format!("phi row {} has length {}, expected rank {r}", p + 1, file.phi[p].len()));
        }
        if file.profile.len() != n {
            return bad(format!("profile has {} entries, expected {n}", file.profile.len()));
        }
        let needs_alpha0 = matches!(class, AlgebraClass::ClassII | AlgebraClass::ClassIII);
        match (&file.alpha0, needs_alpha0) {
            (None, true) => return bad(format!("{class} requires alpha0")),
            (Some(_), false) => return bad(format!("{class} does not take alpha0")),
            (Some(a), true) if a.len() != r => return bad(format!("alpha0 has length {}, expected {r}", a.len())),
            _ => {}
        }
        match (file.epsilon, class) {
            (None, AlgebraClass::ClassIII) => return bad("class_iii requires epsilon".into()),
            (Some(e), AlgebraClass::ClassIII) if e > 1 => return bad(format!("epsilon must be 0 or 1, found {e}")),
            (Some(_), c) if c != AlgebraClass::ClassIII => return bad(format!("{c} does not take epsilon")),
            _ => {}
        }
        if let Some(w) = file.witnesses.iter().find(|w| w.len() != r) {
            return bad(format!("witness {w:?} has length {}, expected {r}", w.len()));
        }
        if class == AlgebraClass::Block0 && file.profile.iter().any(|k| *k != IndexKind::Zero) {
            return bad("block0 has no multi-index directions; profile must be all zero".into());
        }
        if file.degenerate_witt {
            if class != AlgebraClass::ClassI {
                return bad("degenerate_witt applies to class_i only".into());
            }
            if file.profile[1] != IndexKind::Zero || file.phi[1].iter().any(|x| !x.is_zero()) {
                return bad("degenerate_witt requires a zero second row with a zero profile entry".into());
            }
        }
        Ok(AlgebraConfig {
            name: file.name,
            class,
            phi: HomomorphismFamily::new(r, file.phi),
            profile: Profile::new(file.profile),
            alpha0: file.alpha0.map(Alpha::from_vec),
            epsilon: file.epsilon,
            witnesses: file.witnesses.into_iter().map(Alpha::from_vec).collect(),
            degenerate_witt: file.degenerate_witt,
        })
    }

    pub fn to_file(&self) -> ConfigFile {
        ConfigFile {
            name: self.name.clone(),
            description: None,
            class: self.class,
            rank: self.rank(),
            phi: self.phi.rows().to_vec(),
            profile: self.profile.kinds().to_vec(),
            alpha0: self.alpha0.as_ref().map(|a| a.to_vec()),
            epsilon: self.epsilon,
            witnesses: self.witnesses.iter().map(|w| w.to_vec()).collect(),
            degenerate_witt: self.degenerate_witt,
        }
    }

    /// Compact JSON of the mathematical content, stable across runs.
    pub fn canonical_json(&self) -> String {
        let mut file = self.to_file();
        file.name = None;
        serde_json::to_string(&file).expect("config serializes")
    }

    pub fn rank(&self) -> usize {
        self.phi.rank()
    }

    pub fn n(&self) -> usize {
        self.phi.len()
    }

    pub fn alpha0(&self) -> Option<&[i64]> {
        self.alpha0.as_deref()
    }

    pub fn epsilon_value(&self) -> Rational {
        Rational::from_integer(self.epsilon.unwrap_or(0) as i64)
    }

    /// `φ_p(alpha0)`; zero when the class has no `alpha0`.
    pub fn phi_alpha0(&self, p: usize) -> Rational {
        match &self.alpha0 {
            Some(a) => self.phi.eval(p, a),
            None => Rational::zero(),
        }
    }

    pub fn is_super(&self) -> bool {
        self.class.is_super()
    }

    /// Checks that `idx` respects the profile and lengths match.
    pub fn check_key(&self, key: &crate::algebra::BasisKey) -> Result<()> {
        let reason = if key.alpha.len() != self.rank() {
            Some(format!("alpha has length {}, expected {}", key.alpha.len(), self.rank()))
        } else if key.idx.len() != self.n() {
            Some(format!("idx has length {}, expected {}", key.idx.len(), self.n()))
        } else {
            (0..self.n())
                .find(|&p| !self.profile.is_full(p) && key.idx[p] != 0)
                .map(|p| format!("direction {} is pinned to zero", p + 1))
        };
        match reason {
            Some(reason) => Err(Error::InvalidKey { key: key.clone(), reason }),
            None => Ok(()),
        }
    }

    /// The unique lattice point with `φ_p(alpha) = target` for each listed
    /// constraint, if it is integral.
    pub fn find_special_element(&self, constraints: &[(usize, Rational)]) -> Result<Option<Alpha>> {
        let rows: Vec<Vec<Rational>> = constraints.iter().map(|(p, _)| self.phi.rows()[*p].clone()).collect();
        let rhs: Vec<Rational> = constraints.iter().map(|(_, t)| t.clone()).collect();
        match linalg::solve(&rows, &rhs, self.rank()) {
            Solution::Unique(x) => {
                let ints: Option<Alpha> = x.iter().map(Rational::to_i64).collect();
                if let Some(a) = &ints {
                    for (p, t) in constraints {
                        if self.phi.eval(*p, a) != *t {
                            return Err(Error::Invariant("special element failed re-substitution".into()));
                        }
                    }
                }
                Ok(ints)
            }
            Solution::Inconsistent => Ok(None),
            Solution::Underdetermined => {
                Err(Error::Invariant("special element system is underdetermined; joint kernel is not trivial".into()))
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CheckStatus {
    Pass,
    Fail,
    Undecided,
    /// Reported for information; does not gate anything.
    Info,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub status: CheckStatus,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<i64>>,
}

impl CheckResult {
    fn new(name: &str, status: CheckStatus, detail: impl Into<String>) -> Self {
        CheckResult { name: name.to_string(), status, detail: detail.into(), witness: None }
    }

    fn with_witness(mut self, w: &[i64]) -> Self {
        self.witness = Some(w.to_vec());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub class: AlgebraClass,
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    /// `Fail` if any gating check failed, else `Undecided` if any is
    /// undecided, else `Pass`.
    pub fn overall(&self) -> CheckStatus {
        let has = |s| self.checks.iter().any(|c| c.status == s);
        if has(CheckStatus::Fail) {
            CheckStatus::Fail
        } else if has(CheckStatus::Undecided) {
            CheckStatus::Undecided
        } else {
            CheckStatus::Pass
        }
    }

    pub fn get(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn fmt_rat_vec(xs: &[Rational]) -> String {
    let parts: Vec<String> = xs.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(","))
}

/// Searches supplied witnesses, then the box of half-width `radius`, for a
/// lattice point satisfying `pred`.
fn find_witness(cfg: &AlgebraConfig, radius: i64, pred: impl Fn(&[i64]) -> bool) -> Option<(Alpha, bool)> {
    if let Some(w) = cfg.witnesses.iter().find(|w| pred(w)) {
        return Some((w.clone(), true));
    }
    box_points(cfg.rank(), radius).into_iter().find(|a| pred(a)).map(|a| (a, false))
}

fn witness_check(
    cfg: &AlgebraConfig,
    radius: i64,
    name: &str,
    claim: &str,
    pred: impl Fn(&[i64]) -> bool,
) -> CheckResult {
    match find_witness(cfg, radius, pred) {
        Some((w, supplied)) => {
            let source = if supplied { "supplied witness" } else { "box search" };
            CheckResult::new(name, CheckStatus::Pass, format!("{claim}: {source} {w:?}")).with_witness(&w)
        }
        None => CheckResult::new(
            name,
            CheckStatus::Undecided,
            format!("{claim}: no supplied witness works and the box of half-width {radius} is exhausted"),
        ),
    }
}

/// Validates every hypothesis the class imposes, using the default box.
pub fn validate_config(cfg: &AlgebraConfig) -> ValidationReport {
    validate_config_with_radius(cfg, DEFAULT_SEARCH_RADIUS)
}

pub fn validate_config_with_radius(cfg: &AlgebraConfig, radius: i64) -> ValidationReport {
    let mut checks = Vec::new();
    let n = cfg.n();
    let r = cfg.rank();
    let phi = &cfg.phi;

    // Directions pinned to zero need a nonzero homomorphism.
    if cfg.class != AlgebraClass::Block0 {
        for p in 0..n {
            let name = format!("nonzero_phi_{}", p + 1);
            if cfg.profile.is_full(p) {
                checks.push(CheckResult::new(&name, CheckStatus::Info, "direction is full; no condition"));
                continue;
            }
            let relaxed =
                p > 0 && (cfg.degenerate_witt || (cfg.class == AlgebraClass::ClassIII && cfg.epsilon == Some(1)));
            if relaxed {
                let state = if phi.is_zero_row(p) { "zero" } else { "nonzero" };
                checks.push(CheckResult::new(
                    &name,
                    CheckStatus::Info,
                    format!("only enforced for the first direction in this class; row is {state}"),
                ));
            } else if phi.is_zero_row(p) {
                checks.push(CheckResult::new(&name, CheckStatus::Fail, "row is zero on a direction pinned to zero"));
            } else {
                checks.push(CheckResult::new(&name, CheckStatus::Pass, format!("row {}", fmt_rat_vec(&phi.rows()[p]))));
            }
        }
    }

    // Joint kernel triviality, as a rank test.
    let joint_rank = phi.matrix_rank();
    let kernel_name = "trivial_joint_kernel";
    if cfg.class == AlgebraClass::Block0 {
        // For the Block algebra this is part of the simplicity condition.
        let detail = if joint_rank == r {
            "kernels of the two rows intersect trivially".to_string()
        } else {
            format!("joint kernel is nontrivial (rank {joint_rank} < {r})")
        };
        checks.push(CheckResult::new(kernel_name, CheckStatus::Info, detail));
        let two = cfg.find_special_element(&[(0, Rational::zero()), (1, Rational::from_integer(2))]);
        let detail = match two {
            Ok(Some(a)) => format!("fails: {a:?} lies in the kernel of the first row and the second row takes 2"),
            Ok(None) => "holds: the second row never takes 2 on the kernel of the first".to_string(),
            Err(_) => "not decided: joint kernel is nontrivial".to_string(),
        };
        checks.push(CheckResult::new("block_simplicity", CheckStatus::Info, detail));
    } else if joint_rank == r {
        checks.push(CheckResult::new(kernel_name, CheckStatus::Pass, format!("homomorphism matrix has rank {r}")));
    } else {
        let k = linalg::kernel_basis(phi.rows(), r);
        checks.push(
            CheckResult::new(kernel_name, CheckStatus::Fail, format!("rank {joint_rank} < {r}; common kernel vector"))
                .with_witness(&k[0]),
        );
    }

    match cfg.class {
        AlgebraClass::ClassII => {
            let a0 = cfg.alpha0().expect("class_ii has alpha0").to_vec();
            for p in 0..4 {
                let name = format!("separating_element_{}", p + 1);
                let claim = format!("need τ with φ_q(τ) = 0 for q ≠ {} and φ_{}(τ) ≠ 0", p + 1, p + 1);
                checks.push(witness_check(cfg, radius, &name, &claim, |t| {
                    (0..4).all(|q| q == p || phi.eval(q, t).is_zero()) && !phi.eval(p, t).is_zero()
                }));
            }
            let in12 = phi.eval(0, &a0).is_zero() && phi.eval(1, &a0).is_zero();
            let in34 = phi.eval(2, &a0).is_zero() && phi.eval(3, &a0).is_zero();
            let status = if in12 || in34 { CheckStatus::Fail } else { CheckStatus::Pass };
            let detail =
                format!("alpha0 {:?}: in joint kernel of rows 1,2: {in12}; in joint kernel of rows 3,4: {in34}", a0);
            checks.push(CheckResult::new("alpha0_generic", status, detail));
            for p in 0..4 {
                let (others, label) = if p < 2 { ([2, 3], "3,4") } else { ([0, 1], "1,2") };
                let target = phi.eval(p, &a0);
                let name = format!("alpha0_value_{}", p + 1);
                let claim = format!("need τ in the joint kernel of rows {label} with φ_{}(τ) = {target}", p + 1);
                checks.push(witness_check(cfg, radius, &name, &claim, |t| {
                    others.iter().all(|&q| phi.eval(q, t).is_zero()) && phi.eval(p, t) == target
                }));
            }
        }
        AlgebraClass::ClassIII => {
            let a0 = cfg.alpha0().expect("class_iii has alpha0").to_vec();
            for (p, q) in [(0usize, 1usize), (1, 0)] {
                let name = format!("kernel_not_contained_{}_{}", p + 1, q + 1);
                if phi.is_zero_row(q) {
                    checks.push(CheckResult::new(
                        &name,
                        CheckStatus::Info,
                        format!("row {} is zero; no condition", q + 1),
                    ));
                    continue;
                }
                // ker φ_p ⊄ ker φ_q, decided exactly from a kernel basis.
                let basis = linalg::kernel_basis(&phi.rows()[p..=p], r);
                match basis.iter().find(|v| !phi.eval(q, v).is_zero()) {
                    Some(v) => checks.push(
                        CheckResult::new(
                            &name,
                            CheckStatus::Pass,
                            format!("kernel of row {} is not inside kernel of row {}", p + 1, q + 1),
                        )
                        .with_witness(v),
                    ),
                    None => checks.push(CheckResult::new(
                        &name,
                        CheckStatus::Fail,
                        format!("kernel of row {} is contained in kernel of row {}", p + 1, q + 1),
                    )),
                }
            }
            if cfg.epsilon == Some(0) {
                let status = if a0.iter().all(|&x| x == 0) { CheckStatus::Fail } else { CheckStatus::Pass };
                checks.push(CheckResult::new("alpha0_nonzero", status, format!("alpha0 = {a0:?}")));
            }
        }
        _ => {}
    }

    ValidationReport { class: cfg.class, checks }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(json: &str) -> AlgebraConfig {
        AlgebraConfig::from_json(json).unwrap()
    }

    #[test]
    fn standard_class_one_passes() {
        let c = cfg(r#"{"class":"class_i","rank":2,"phi":[["1","0"],["0","1"]],"profile":["full","full"]}"#);
        assert_eq!(validate_config(&c).overall(), CheckStatus::Pass);
    }

    #[test]
    fn pinned_zero_row_fails() {
        let c = cfg(r#"{"class":"class_i","rank":1,"phi":[["0"],["1"]],"profile":["zero","full"]}"#);
        let rep = validate_config(&c);
        assert_eq!(rep.overall(), CheckStatus::Fail);
        assert_eq!(rep.get("nonzero_phi_1").unwrap().status, CheckStatus::Fail);
    }

    #[test]
    fn special_element_solver() {
        let c = cfg(r#"{"class":"class_i","rank":2,"phi":[["1","0"],["0","1"]],"profile":["zero","zero"]}"#);
        let s = c.find_special_element(&[(0, Rational::zero()), (1, Rational::one())]).unwrap();
        assert_eq!(s.unwrap().to_vec(), vec![0, 1]);
        let z = c.find_special_element(&[(0, Rational::zero()), (1, Rational::zero())]).unwrap();
        assert_eq!(z.unwrap().to_vec(), vec![0, 0]);
        let c = cfg(r#"{"class":"class_i","rank":2,"phi":[["1","0"],["0","2"]],"profile":["zero","zero"]}"#);
        assert_eq!(c.find_special_element(&[(0, Rational::zero()), (1, Rational::one())]).unwrap(), None);
    }

    #[test]
    fn structural_errors() {
        for bad in [
            r#"{"class":"class_i","rank":2,"phi":[["1","0"]],"profile":["full","full"]}"#,
            r#"{"class":"class_i","rank":2,"phi":[["1","0"],["0"]],"profile":["full","full"]}"#,
            r#"{"class":"class_ii","rank":1,"phi":[["1"],["1"],["1"],["1"]],"profile":["zero","zero","zero","zero"]}"#,
            r#"{"class":"class_i","rank":1,"phi":[[0.5],["1"]],"profile":["full","full"]}"#,
            r#"{"class":"class_iii","rank":1,"phi":[["1"],["0"]],"profile":["zero","zero"],"alpha0":[1],"epsilon":1.0}"#,
            r#"{"class":"class_i","rank":1,"phi":[["1"],["0"]],"profile":["full","full"],"bogus":1}"#,
        ] {
            assert!(AlgebraConfig::from_json(bad).is_err(), "{bad}");
        }
    }
}
