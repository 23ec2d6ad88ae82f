//! Classification of `G_n(m,k)`: finiteness, hyperbolicity, SQ-universality
//! and the Tits alternative, with the small-cancellation flags T(5), T(6).
//!
//! Groups with `n <= 12` are looked up in an embedded table of isomorphism
//! classes; for `n >= 13` the congruence conditions on `A = k`, `B = k - m`
//! decide everything.

use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::params::{self, FibParams, OrbitKey, ParamError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    #[error(transparent)]
    Params(#[from] ParamError),
    #[error("internal table has no row for orbit key (A,B)=({},{}) at n={}", .0.a, .0.b, .0.n)]
    UnmappedKey(OrbitKey),
    #[error("{family} is not defined for n={n}")]
    FamilyRange { family: &'static str, n: u32 },
    #[error("the congruence table covers n >= 13 only, got n={0}")]
    CongruenceRange(u32),
    #[error("the isomorphism-class table covers 3 <= n <= 12 only, got n={0}")]
    ClassTableRange(u32),
}

/// Decimal-string serde for big integers so JSON stays readable.
pub(crate) mod big_decimal {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }

    pub mod option {
        use super::*;

        pub fn serialize<S: Serializer>(v: &Option<BigUint>, s: S) -> Result<S::Ok, S::Error> {
            match v {
                Some(v) => s.serialize_some(&v.to_string()),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigUint>, D::Error> {
            Option::<String>::deserialize(d)?
                .map(|s| s.parse().map_err(serde::de::Error::custom))
                .transpose()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Family {
    Trivial,
    FiniteCyclic {
        #[serde(with = "big_decimal")]
        order: BigUint,
    },
    Fibonacci { n: u32 },
    Sieradski { n: u32 },
    GilbertHowie { n: u32, m: u32 },
    /// `H(n, n/2 + 2)`
    HalfShiftGH { n: u32 },
    /// `A` or `B` equals `s n / p` with `(s,p) = 1`.
    OrderP { p: u32, s: u32 },
    GenericT6,
    TableEntry { name: String },
    Unknown,
}

impl Family {
    pub fn is_finite(&self) -> bool {
        matches!(self, Family::Trivial | Family::FiniteCyclic { .. })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Trivial => write!(f, "trivial"),
            Family::FiniteCyclic { order } => write!(f, "finite cyclic Z_{order}"),
            Family::Fibonacci { n } => write!(f, "Fibonacci F(2,{n})"),
            Family::Sieradski { n } => write!(f, "Sieradski S(2,{n})"),
            Family::GilbertHowie { n, m } => write!(f, "Gilbert-Howie H({n},{m})"),
            Family::HalfShiftGH { n } => write!(f, "Gilbert-Howie H({n},{})", n / 2 + 2),
            Family::OrderP { p, s } => write!(f, "order-{p} case (s={s})"),
            Family::GenericT6 => write!(f, "generic T(6)"),
            Family::TableEntry { name } => write!(f, "{name}"),
            Family::Unknown => write!(f, "unknown"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Hyperbolicity {
    NonElementaryHyperbolic,
    NotHyperbolic,
    Finite,
    Unknown,
}

impl fmt::Display for Hyperbolicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Hyperbolicity::NonElementaryHyperbolic => "non-elementary hyperbolic",
            Hyperbolicity::NotHyperbolic => "not hyperbolic",
            Hyperbolicity::Finite => "finite (elementary hyperbolic)",
            Hyperbolicity::Unknown => "unknown (open problem)",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Tits {
    Finite,
    VirtuallySolvable(String),
    SQUniversal,
    FreeSubgroupOnly,
    Unknown,
}

impl fmt::Display for Tits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tits::Finite => write!(f, "finite"),
            Tits::VirtuallySolvable(d) => write!(f, "virtually solvable ({d})"),
            Tits::SQUniversal => write!(f, "SQ-universal"),
            Tits::FreeSubgroupOnly => write!(f, "contains a non-abelian free subgroup"),
            Tits::Unknown => write!(f, "unknown (open problem)"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SmallCancellationFlags {
    pub t5: bool,
    pub t6: bool,
}

/// Clause of the `n >= 13` classification that fired.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Clause {
    /// `A = B`
    EqualResidues,
    /// `A` or `B` is `n/2`
    HalfResidue,
    /// `A + B = 0`
    SumZero,
    /// `A + B = n/2`
    SumHalf,
    /// none of the above
    Hyperbolic,
}

impl Clause {
    pub fn letter(self) -> char {
        match self {
            Clause::EqualResidues => 'a',
            Clause::HalfResidue => 'b',
            Clause::SumZero => 'c',
            Clause::SumHalf => 'd',
            Clause::Hyperbolic => 'e',
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub params: FibParams,
    pub family: Family,
    pub name: String,
    #[serde(with = "big_decimal::option")]
    pub order: Option<BigUint>,
    pub hyperbolicity: Hyperbolicity,
    pub tits: Tits,
    pub small_cancellation: SmallCancellationFlags,
    pub clause: Option<Clause>,
    pub provenance: String,
}

impl Classification {
    pub fn is_finite(&self) -> bool {
        self.hyperbolicity == Hyperbolicity::Finite
    }

    /// The verdict part, for comparing classifications across parameter moves.
    /// The `s` of an order-`p` case depends on the representative and is dropped.
    pub fn verdict(&self) -> (Family, Option<BigUint>, Hyperbolicity, Tits) {
        let family = match self.family {
            Family::OrderP { p, .. } => Family::OrderP { p, s: 0 },
            ref f => f.clone(),
        };
        (family, self.order.clone(), self.hyperbolicity, self.tits.clone())
    }
}

fn pow2(e: u32) -> BigUint {
    BigUint::one() << e as usize
}

/// `2^n - 1`, the order when `m = 0`.
pub fn order_equal_residues(n: u32) -> BigUint {
    pow2(n) - BigUint::one()
}

/// `2^{n/2} - (-1)^{m + n/2}`, the order when `A` or `B` is `n/2`.
pub fn order_half_residue(n: u32, m: u32) -> BigUint {
    let h = n / 2;
    if (m + h).is_multiple_of(2) {
        pow2(h) - BigUint::one()
    } else {
        pow2(h) + BigUint::one()
    }
}

/// T(5) congruence criterion: `A +- B != 0` and `tA, tB != 0` for `1 <= t <= 4`.
pub fn is_t5(n: u32, m: u32, k: u32) -> bool {
    let (a, b, n) = residues(n, m, k);
    (a + b) % n != 0 && (a + n - b) % n != 0 && (1..=4).all(|t| (t * a) % n != 0 && (t * b) % n != 0)
}

fn residues(n: u32, m: u32, k: u32) -> (u64, u64, u64) {
    let n64 = n as u64;
    let a = k as u64 % n64;
    let b = (k as u64 + n64 - m as u64 % n64) % n64;
    (a, b, n64)
}

/// Congruences equivalent to star-graph girth at least 6: no `tA`, `tB`
/// vanishes for `1 <= t <= 5`, and none of `A +- B`, `A +- 2B`, `B +- 2A` vanish.
pub fn t6_profile(n: u32, m: u32, k: u32) -> bool {
    let (a, b, n) = residues(n, m, k);
    let z = |x: u64| x.is_multiple_of(n);
    let neg = |x: u64| n - x % n;
    (1..=5).all(|t| !z(t * a) && !z(t * b))
        && !z(a + b)
        && !z(a + neg(b))
        && !z(a + 2 * b)
        && !z(a + neg(2 * b % n))
        && !z(b + 2 * a)
        && !z(b + neg(2 * a % n))
}

/// The hyperbolic T(6) congruence list, with `A + B = n/2` excluded as well.
/// Residues equal to zero make the word degenerate and give `false`.
pub fn is_t6_generic(n: u32, m: u32, k: u32) -> bool {
    let (a, b, n) = residues(n, m, k);
    if a == 0 || b == 0 {
        return false;
    }
    let z = |x: u64| x.is_multiple_of(n);
    let half = |x: u64| z(2 * x) && !z(x);
    let third = |x: u64| z(3 * x) && !z(x);
    let quarter = |x: u64| z(4 * x) && !z(2 * x);
    let fifth = |x: u64| z(5 * x) && !z(x);
    let special = |x: u64| half(x) || third(x) || quarter(x) || fifth(x);
    let neg = |x: u64| (n - x % n) % n;
    !(special(a)
        || special(b)
        || z(a + b)
        || z(a + neg(b))
        || z(a + 2 * b)
        || z(a + neg(2 * b))
        || z(b + 2 * a)
        || z(b + neg(2 * a))
        || half(a + b))
}

fn flags(p: &FibParams) -> SmallCancellationFlags {
    SmallCancellationFlags { t5: is_t5(p.n, p.m, p.k), t6: t6_profile(p.n, p.m, p.k) }
}

/// Families with a per-`n` status.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StatusFamily {
    Fibonacci,
    Sieradski,
    GilbertHowie3,
    HalfShiftGH,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyStatus {
    pub hyperbolicity: Hyperbolicity,
    pub tits: Tits,
    #[serde(with = "big_decimal::option")]
    pub order: Option<BigUint>,
    pub provenance: String,
}

fn finite(order: u64, provenance: &str) -> FamilyStatus {
    FamilyStatus {
        hyperbolicity: Hyperbolicity::Finite,
        tits: Tits::Finite,
        order: Some(BigUint::from(order)),
        provenance: provenance.to_string(),
    }
}

fn infinite(h: Hyperbolicity, tits: Tits, provenance: &str) -> FamilyStatus {
    FamilyStatus { hyperbolicity: h, tits, order: None, provenance: provenance.to_string() }
}

pub fn family_status(family: StatusFamily, n: u32) -> Result<FamilyStatus, ClassifyError> {
    use Hyperbolicity::*;
    let range = |name| ClassifyError::FamilyRange { family: name, n };
    match family {
        StatusFamily::Fibonacci => {
            if n < 2 {
                return Err(range("F(2,n)"));
            }
            Ok(match n {
                2 => finite(1, "F(2,2) is trivial"),
                3 => finite(8, "F(2,3) is the quaternion group of order 8"),
                4 => finite(5, "F(2,4) is cyclic of order 5"),
                5 => finite(11, "F(2,5) is cyclic of order 11"),
                7 => finite(29, "F(2,7) is cyclic of order 29"),
                6 => infinite(
                    NotHyperbolic,
                    Tits::VirtuallySolvable("virtually Z^3".into()),
                    "F(2,6) is a Euclidean 3-manifold group, virtually Z^3",
                ),
                _ => infinite(
                    NonElementaryHyperbolic,
                    Tits::SQUniversal,
                    "F(2,n) for n >= 8 is non-elementary hyperbolic, hence SQ-universal",
                ),
            })
        }
        StatusFamily::Sieradski => {
            if n < 2 {
                return Err(range("S(2,n)"));
            }
            Ok(match n {
                2 => finite(3, "S(2,2) is cyclic of order 3"),
                3 => finite(8, "S(2,3) is the quaternion group of order 8"),
                4 => finite(24, "S(2,4) is SL(2,3)"),
                5 => finite(120, "S(2,5) is SL(2,5)"),
                6 => infinite(
                    NotHyperbolic,
                    Tits::VirtuallySolvable("metabelian".into()),
                    "S(2,6) is metabelian and contains Z^2",
                ),
                _ => infinite(
                    NotHyperbolic,
                    Tits::SQUniversal,
                    "S(2,n) for n >= 7 is an infinite 3-manifold group containing Z^2, and is SQ-universal",
                ),
            })
        }
        StatusFamily::GilbertHowie3 => {
            if n < 2 {
                return Err(range("H(n,3)"));
            }
            Ok(match n {
                2 => finite(1, "H(2,3) is trivial"),
                3 => finite(7, "H(3,3) is cyclic of order 7"),
                4 => finite(5, "H(4,3) is cyclic of order 5"),
                5 => finite(11, "H(5,3) is cyclic of order 11"),
                6 => finite(56, "H(6,3) is Z_2^3 x| Z_7"),
                8 => finite(295245, "H(8,3) is solvable of order 3^10 * 5"),
                7 => infinite(
                    NotHyperbolic,
                    Tits::VirtuallySolvable("virtually Z^8".into()),
                    "H(7,3) is virtually Z^8",
                ),
                _ => infinite(
                    NonElementaryHyperbolic,
                    Tits::SQUniversal,
                    "H(n,3) for n >= 9 is non-elementary hyperbolic, hence SQ-universal",
                ),
            })
        }
        StatusFamily::HalfShiftGH => {
            if n < 2 || n % 2 == 1 {
                return Err(range("H(n,n/2+2)"));
            }
            Ok(match n {
                2 => finite(1, "H(2,3) is trivial"),
                4 => finite(15, "H(4,4) = G_4(0,1) is cyclic of order 15"),
                6 => infinite(
                    NotHyperbolic,
                    Tits::VirtuallySolvable("virtually Z^3".into()),
                    "H(6,5) is isomorphic to F(2,6), virtually Z^3",
                ),
                10 => infinite(
                    NotHyperbolic,
                    Tits::FreeSubgroupOnly,
                    "H(10,7) is not hyperbolic and contains a non-abelian free subgroup",
                ),
                _ => infinite(
                    NotHyperbolic,
                    Tits::SQUniversal,
                    "H(n,n/2+2) for even n >= 8, n != 10, is not hyperbolic and is SQ-universal",
                ),
            })
        }
    }
}

/// Kind of a row of the isomorphism-class table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RowKind {
    Fibonacci,
    Sieradski,
    GilbertHowie3,
    Cyclic,
    Named,
    Open,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TableOrder {
    Finite(u64),
    Infinite,
    Unknown,
}

impl fmt::Display for TableOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TableOrder::Finite(o) => write!(f, "{o}"),
            TableOrder::Infinite => write!(f, "infinite"),
            TableOrder::Unknown => write!(f, "?"),
        }
    }
}

/// One isomorphism class with `3 <= n <= 12`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ClassRow {
    pub n: u32,
    /// Representative parameters.
    pub m: u32,
    pub k: u32,
    pub name: &'static str,
    pub group: &'static str,
    pub order: TableOrder,
    pub hyp: &'static str,
    pub tits: &'static str,
    pub kind: RowKind,
}

const fn row(
    n: u32,
    m: u32,
    k: u32,
    name: &'static str,
    group: &'static str,
    order: TableOrder,
    hyp: &'static str,
    tits: &'static str,
    kind: RowKind,
) -> ClassRow {
    ClassRow { n, m, k, name, group, order, hyp, tits, kind }
}

use RowKind as K;
use TableOrder::{Finite as Fin, Infinite as Inf};

const SQ: &str = "SQ-univ.";
const MFD: &str = "3-mfd. gp.";

#[rustfmt::skip]
static CLASS_ROWS: &[ClassRow] = &[
    row(3, 1, 2, "F(2,3)", "Q_8", Fin(8), "No", "finite", K::Fibonacci),
    row(4, 1, 2, "F(2,4)", "cyclic", Fin(5), "No", "finite", K::Fibonacci),
    row(4, 2, 1, "S(2,4)", "SL(2,3)", Fin(24), "No", "finite", K::Sieradski),
    row(5, 1, 2, "F(2,5)", "cyclic, T(5)", Fin(11), "No", "finite", K::Fibonacci),
    row(5, 2, 1, "S(2,5)", "SL(2,5)", Fin(120), "No", "finite", K::Sieradski),
    row(6, 1, 2, "F(2,6)", MFD, Inf, "No", "virtually Z^3", K::Fibonacci),
    row(6, 2, 1, "S(2,6)", MFD, Inf, "No", "metabelian", K::Sieradski),
    row(6, 3, 1, "H(6,3)", "Z_2^3 x| Z_7", Fin(56), "No", "finite", K::GilbertHowie3),
    row(6, 4, 1, "H(6,4)", "cyclic", Fin(9), "No", "finite", K::Cyclic),
    row(6, 1, 3, "G_6(1,3)", "cyclic", Fin(7), "No", "finite", K::Cyclic),
    row(7, 1, 2, "F(2,7)", "cyclic, T(5)", Fin(29), "No", "finite", K::Fibonacci),
    row(7, 2, 1, "S(2,7)", MFD, Inf, "No", SQ, K::Sieradski),
    row(7, 3, 1, "H(7,3)", "T(5)", Inf, "No", "virtually Z^8", K::GilbertHowie3),
    row(8, 1, 2, "F(2,8)", MFD, Inf, "Yes", SQ, K::Fibonacci),
    row(8, 2, 1, "S(2,8)", MFD, Inf, "No", SQ, K::Sieradski),
    row(8, 3, 1, "H(8,3)", "solvable", Fin(295245), "No", "finite", K::GilbertHowie3),
    row(8, 4, 1, "H(8,4)", "T(6)", Inf, "No", SQ, K::Named),
    row(8, 5, 1, "H(8,5)", "cyclic", Fin(17), "No", "finite", K::Cyclic),
    row(8, 6, 1, "H(8,6)", "T(6)", Inf, "No", SQ, K::Named),
    row(9, 1, 2, "F(2,9)", "T(5)", Inf, "Yes", SQ, K::Fibonacci),
    row(9, 2, 1, "S(2,9)", MFD, Inf, "No", SQ, K::Sieradski),
    row(9, 3, 1, "H(9,3)", "T(5)", Inf, "Yes", SQ, K::GilbertHowie3),
    row(9, 4, 1, "H(9,4)", "", TableOrder::Unknown, "? (not hyp. if torsion-free)", "?", K::Open),
    row(9, 7, 1, "H(9,7)", "", TableOrder::Unknown, "?", "?", K::Open),
    row(10, 1, 2, "F(2,10)", "3-mfd. gp., T(5)", Inf, "Yes", SQ, K::Fibonacci),
    row(10, 2, 1, "S(2,10)", MFD, Inf, "No", SQ, K::Sieradski),
    row(10, 3, 1, "H(10,3)", "T(5)", Inf, "Yes", SQ, K::GilbertHowie3),
    row(10, 7, 1, "H(10,7)", "T(5)", Inf, "No", "Free subgroup", K::Named),
    row(10, 4, 1, "H(10,4)", "T(6)", Inf, "Yes", SQ, K::Named),
    row(10, 5, 1, "H(10,5)", "T(5)", Inf, "Yes", SQ, K::Named),
    row(10, 6, 1, "H(10,6)", "cyclic", Fin(33), "No", "finite", K::Cyclic),
    row(10, 1, 6, "G_10(1,6)", "cyclic", Fin(31), "No", "finite", K::Cyclic),
    row(11, 1, 2, "F(2,11)", "T(5)", Inf, "Yes", SQ, K::Fibonacci),
    row(11, 2, 1, "S(2,11)", MFD, Inf, "No", SQ, K::Sieradski),
    row(11, 3, 1, "H(11,3)", "T(5)", Inf, "Yes", SQ, K::GilbertHowie3),
    row(11, 4, 1, "H(11,4)", "T(6)", Inf, "Yes", SQ, K::Named),
    row(11, 8, 1, "H(11,8)", "T(6)", Inf, "Yes", SQ, K::Named),
    row(12, 1, 2, "F(2,12)", "3-mfd. gp., T(5)", Inf, "Yes", SQ, K::Fibonacci),
    row(12, 2, 1, "S(2,12)", MFD, Inf, "No", SQ, K::Sieradski),
    row(12, 3, 1, "H(12,3)", "T(5)", Inf, "Yes", SQ, K::GilbertHowie3),
    row(12, 8, 1, "H(12,8)", "T(6)", Inf, "No", SQ, K::Named),
    row(12, 7, 1, "H(12,7)", "cyclic", Fin(65), "No", "finite", K::Cyclic),
    row(12, 6, 1, "H(12,6)", "T(6)", Inf, "Yes", SQ, K::Named),
    row(12, 5, 1, "H(12,5)", "", Inf, "No", SQ, K::Named),
    row(12, 4, 1, "H(12,4)", "", Inf, "Yes", SQ, K::Named),
    row(12, 9, 1, "H(12,9)", "", Inf, "Yes", SQ, K::Named),
    row(12, 10, 1, "H(12,10)", "", Inf, "Yes", SQ, K::Named),
    row(12, 1, 3, "G_12(1,3)", "", Inf, "Yes", SQ, K::Named),
    row(12, 1, 9, "G_12(1,9)", "", Inf, "Yes", SQ, K::Named),
];

impl ClassRow {
    pub fn key(&self) -> OrbitKey {
        let p = params::derive(self.n, self.m, self.k).expect("table representative in range");
        params::canonicalize(&p).expect("table representative coprime")
    }

    fn hyperbolicity(&self) -> Hyperbolicity {
        match (self.hyp, self.order) {
            ("Yes", _) => Hyperbolicity::NonElementaryHyperbolic,
            ("No", TableOrder::Finite(_)) => Hyperbolicity::Finite,
            ("No", _) => Hyperbolicity::NotHyperbolic,
            _ => Hyperbolicity::Unknown,
        }
    }

    fn tits(&self) -> Tits {
        match self.tits {
            "finite" => Tits::Finite,
            "SQ-univ." => Tits::SQUniversal,
            "Free subgroup" => Tits::FreeSubgroupOnly,
            "?" => Tits::Unknown,
            other => Tits::VirtuallySolvable(other.to_string()),
        }
    }
}

/// Rows of the isomorphism-class table for one `n`, in table order.
pub fn class_rows(n: u32) -> Result<Vec<ClassRow>, ClassifyError> {
    if !(3..=12).contains(&n) {
        return Err(ClassifyError::ClassTableRange(n));
    }
    Ok(CLASS_ROWS.iter().filter(|r| r.n == n).copied().collect())
}

pub fn lookup_class(key: OrbitKey) -> Result<ClassRow, ClassifyError> {
    CLASS_ROWS
        .iter()
        .find(|r| r.n == key.n && r.key() == key)
        .copied()
        .ok_or(ClassifyError::UnmappedKey(key))
}

pub fn classify(n: u32, m: u32, k: u32) -> Result<Classification, ClassifyError> {
    let p = params::derive(n, m, k)?;
    p.require_coprime()?;
    let fl = flags(&p);
    let base = |family: Family, name: String, order: Option<BigUint>, h, tits, clause, prov: &str| Classification {
        params: p,
        family,
        name,
        order,
        hyperbolicity: h,
        tits,
        small_cancellation: fl,
        clause,
        provenance: prov.to_string(),
    };
    let small_name = |default: String| -> String {
        if n != 2 {
            return default;
        }
        match (m, k) {
            (0, 1) => "S(2,2)".into(),
            (1, 0) => "F(2,2)".into(),
            (1, 1) => "H(2,3)".into(),
            _ => default,
        }
    };
    if p.a == 0 || p.b == 0 {
        return Ok(base(
            Family::Trivial,
            small_name("1".into()),
            Some(BigUint::one()),
            Hyperbolicity::Finite,
            Tits::Finite,
            None,
            "A = 0 or B = 0 mod n: the group is trivial",
        ));
    }
    let cyclic = |order: BigUint, clause, prov: &str| {
        base(
            Family::FiniteCyclic { order: order.clone() },
            small_name(format!("Z_{order}")),
            Some(order),
            Hyperbolicity::Finite,
            Tits::Finite,
            clause,
            prov,
        )
    };
    let big_n = n >= 13;
    if p.m == 0 {
        return Ok(cyclic(
            order_equal_residues(n),
            big_n.then_some(Clause::EqualResidues),
            "A = B mod n (m = 0): cyclic of order 2^n - 1",
        ));
    }
    if !big_n {
        return classify_small(&p, fl);
    }
    let (a, b) = (p.a, p.b);
    if params::is_half(a, n) || params::is_half(b, n) {
        return Ok(cyclic(
            order_half_residue(n, m),
            Some(Clause::HalfResidue),
            "A or B = n/2 mod n: cyclic of order 2^(n/2) - (-1)^(m+n/2)",
        ));
    }
    let status = |f| family_status(f, n).expect("n >= 13 in range");
    if (a + b) % n == 0 {
        let s = status(StatusFamily::Sieradski);
        return Ok(base(
            Family::Sieradski { n },
            format!("S(2,{n})"),
            None,
            s.hyperbolicity,
            s.tits,
            Some(Clause::SumZero),
            "A + B = 0 mod n: isomorphic to S(2,n), not hyperbolic and SQ-universal",
        ));
    }
    if params::is_half(a + b, n) {
        let s = status(StatusFamily::HalfShiftGH);
        return Ok(base(
            Family::HalfShiftGH { n },
            format!("H({n},{})", n / 2 + 2),
            None,
            s.hyperbolicity,
            s.tits,
            Some(Clause::SumHalf),
            "A + B = n/2 mod n: isomorphic to H(n,n/2+2), not hyperbolic and SQ-universal",
        ));
    }
    let gname = format!("G_{n}({m},{k})");
    let hyp = |family, name, prov: &str| {
        base(
            family,
            name,
            None,
            Hyperbolicity::NonElementaryHyperbolic,
            Tits::SQUniversal,
            Some(Clause::Hyperbolic),
            prov,
        )
    };
    for q in 3..=5 {
        for x in [a, b] {
            if params::has_order(x, n, q) {
                let s = x * q / n;
                return Ok(hyp(
                    Family::OrderP { p: q, s },
                    gname,
                    "A or B = sn/p with p in {3,4,5}, (s,p) = 1: non-elementary hyperbolic, hence SQ-universal",
                ));
            }
        }
    }
    let n64 = n as u64;
    let (a64, b64) = (a as u64, b as u64);
    if (a64 + 2 * (n64 - b64)).is_multiple_of(n64) || (b64 + 2 * (n64 - a64)).is_multiple_of(n64) {
        return Ok(hyp(
            Family::Fibonacci { n },
            format!("F(2,{n})"),
            "A = 2B or B = 2A mod n: isomorphic to F(2,n), non-elementary hyperbolic",
        ));
    }
    if (a64 + 2 * b64) % n64 == 0 || (b64 + 2 * a64) % n64 == 0 {
        return Ok(hyp(
            Family::GilbertHowie { n, m: 3 },
            format!("H({n},3)"),
            "A + 2B = 0 or B + 2A = 0 mod n: isomorphic to H(n,3), non-elementary hyperbolic",
        ));
    }
    Ok(hyp(
        Family::GenericT6,
        gname,
        "T(6) presentation outside the exceptional congruences: non-elementary hyperbolic, hence SQ-universal",
    ))
}

fn classify_small(p: &FibParams, fl: SmallCancellationFlags) -> Result<Classification, ClassifyError> {
    let key = params::canonicalize(p)?;
    let r = lookup_class(key)?;
    let n = p.n;
    let family = match r.kind {
        RowKind::Fibonacci => Family::Fibonacci { n },
        RowKind::Sieradski => Family::Sieradski { n },
        RowKind::GilbertHowie3 => Family::GilbertHowie { n, m: 3 },
        RowKind::Cyclic => match r.order {
            TableOrder::Finite(o) => Family::FiniteCyclic { order: BigUint::from(o) },
            _ => unreachable!("cyclic rows are finite"),
        },
        RowKind::Open => Family::Unknown,
        RowKind::Named => Family::TableEntry { name: r.name.to_string() },
    };
    let order = match r.order {
        TableOrder::Finite(o) => Some(BigUint::from(o)),
        _ => None,
    };
    Ok(Classification {
        params: *p,
        family,
        name: r.name.to_string(),
        order,
        hyperbolicity: r.hyperbolicity(),
        tits: r.tits(),
        small_cancellation: fl,
        clause: None,
        provenance: format!("isomorphism-class table for n <= 12, row {}", r.name),
    })
}

/// One row of the congruence table for a fixed `n >= 13`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceRow {
    pub congruence: String,
    pub group: String,
    pub hyp: String,
    pub tits: String,
    /// Number of `(m,k)` with `0 <= m,k < n`, `m != k`, `k != 0`,
    /// `gcd(n,m,k) = 1` whose first matching row is this one.
    pub count: usize,
    pub example: Option<(u32, u32)>,
}

/// Index (0..8) of the first congruence row matching the parameters.
pub fn congruence_row_index(p: &FibParams) -> usize {
    let n = p.n as u64;
    let (a, b) = (p.a as u64, p.b as u64);
    let z = |x: u64| x.is_multiple_of(n);
    let half = |x: u64| params::is_half((x % n) as u32, p.n);
    let order_p = |x: u32| (3..=5).any(|q| params::has_order(x, p.n, q));
    if half(a) || half(b) {
        0
    } else if order_p(p.a) || order_p(p.b) {
        1
    } else if z(a + b) {
        2
    } else if z(a + n - b) {
        3
    } else if z(a + 2 * (n - b)) || z(b + 2 * (n - a)) {
        4
    } else if z(a + 2 * b) || z(b + 2 * a) {
        5
    } else if half(a + b) {
        6
    } else {
        7
    }
}

pub fn congruence_table(n: u32) -> Result<Vec<CongruenceRow>, ClassifyError> {
    if n < 13 {
        return Err(ClassifyError::CongruenceRange(n));
    }
    let h = n / 2;
    let mk = |c: &str, g: String, hyp: &str, tits: &str| CongruenceRow {
        congruence: c.into(),
        group: g,
        hyp: hyp.into(),
        tits: tits.into(),
        count: 0,
        example: None,
    };
    let mut rows = vec![
        mk("B = n/2 or A = n/2", format!("Z_(2^{h}-(-1)^(m+{h}))"), "No", "finite"),
        mk("B = sn/p or A = sn/p, (s,p)=1, p in {3,4,5}", String::new(), "Yes", "SQ-univ."),
        mk("A+B = 0", format!("S(2,{n})"), "No", "SQ-univ."),
        mk("A-B = 0", format!("Z_{}", order_equal_residues(n)), "No", "finite"),
        mk("A-2B = 0 or B-2A = 0", format!("F(2,{n}), T(5)"), "Yes", "SQ-univ."),
        mk("A+2B = 0 or B+2A = 0", format!("H({n},3), T(5)"), "Yes", "SQ-univ."),
        mk("B+A = n/2", format!("H({n},{}), T(6)", h + 2), "No", "SQ-univ."),
        mk("none of the above", "T(6)".into(), "Yes", "SQ-univ."),
    ];
    for m in 0..n {
        for k in 1..n {
            if m == k {
                continue;
            }
            let p = params::derive(n, m, k)?;
            if p.gcd > 1 {
                continue;
            }
            let r = &mut rows[congruence_row_index(&p)];
            r.count += 1;
            r.example.get_or_insert((m, k));
        }
    }
    Ok(rows)
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = &self.params;
        write!(f, "G_{}({},{}) A={} B={}: {}", p.n, p.m, p.k, p.a, p.b, self.name)?;
        match &self.order {
            Some(o) => write!(f, ", order {o}")?,
            None if self.family == Family::Unknown => write!(f, ", order unknown")?,
            None => write!(f, ", infinite")?,
        }
        write!(f, "; {}; {}", self.hyperbolicity, self.tits)?;
        if self.small_cancellation.t6 {
            write!(f, "; T(6)")?;
        } else if self.small_cancellation.t5 {
            write!(f, "; T(5)")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(n: u32, m: u32, k: u32) -> Classification {
        classify(n, m, k).unwrap()
    }

    #[test]
    fn large_n_examples() {
        let x = c(14, 0, 3);
        assert_eq!(x.family, Family::FiniteCyclic { order: BigUint::from(16383u32) });
        assert_eq!(x.clause, Some(Clause::EqualResidues));
        let x = c(16, 1, 8);
        assert_eq!(x.order, Some(BigUint::from(257u32)));
        assert_eq!(x.clause, Some(Clause::HalfResidue));
        let x = c(13, 2, 1);
        assert_eq!(x.family, Family::Sieradski { n: 13 });
        assert_eq!((x.hyperbolicity, x.tits), (Hyperbolicity::NotHyperbolic, Tits::SQUniversal));
        let x = c(18, 11, 1);
        assert_eq!(x.family, Family::HalfShiftGH { n: 18 });
        assert_eq!(x.name, "H(18,11)");
        assert_eq!(x.hyperbolicity, Hyperbolicity::NotHyperbolic);
        let x = c(15, 1, 5);
        assert_eq!(x.family, Family::OrderP { p: 3, s: 1 });
        assert_eq!(x.hyperbolicity, Hyperbolicity::NonElementaryHyperbolic);
        let x = c(13, 1, 2);
        assert_eq!(x.family, Family::Fibonacci { n: 13 });
        assert_eq!(x.hyperbolicity, Hyperbolicity::NonElementaryHyperbolic);
        // A=1, B=11: A + 2B = 23 = 0 mod 23
        assert_eq!(c(23, 13, 1).family, Family::GilbertHowie { n: 23, m: 3 });
        assert_eq!(c(13, 4, 1).family, Family::GenericT6);
    }

    #[test]
    fn small_n_examples() {
        let x = c(9, 4, 1);
        assert_eq!((x.family.clone(), x.tits.clone()), (Family::Unknown, Tits::Unknown));
        let x = c(12, 5, 1);
        assert_eq!(x.family, Family::TableEntry { name: "H(12,5)".into() });
        assert_eq!((x.hyperbolicity, x.tits), (Hyperbolicity::NotHyperbolic, Tits::SQUniversal));
        let x = c(10, 7, 1);
        assert_eq!(x.family, Family::TableEntry { name: "H(10,7)".into() });
        assert_eq!((x.hyperbolicity, x.tits), (Hyperbolicity::NotHyperbolic, Tits::FreeSubgroupOnly));
        let x = c(6, 1, 2);
        assert_eq!(x.family, Family::Fibonacci { n: 6 });
        assert_eq!(x.tits, Tits::VirtuallySolvable("virtually Z^3".into()));
        assert_eq!(c(8, 5, 1).family, Family::FiniteCyclic { order: BigUint::from(17u32) });
        assert_eq!(c(9, 7, 1).family, Family::Unknown);
    }

    #[test]
    fn rank_two() {
        assert_eq!(c(2, 0, 1).name, "S(2,2)");
        assert_eq!(c(2, 0, 1).order, Some(BigUint::from(3u32)));
        assert_eq!(c(2, 1, 0).family, Family::Trivial);
        assert_eq!(c(2, 1, 0).name, "F(2,2)");
        assert_eq!(c(2, 1, 1).name, "H(2,3)");
        assert!(classify(2, 0, 0).is_err());
    }

    #[test]
    fn errors() {
        let e = classify(6, 2, 4).unwrap_err();
        assert!(e.to_string().contains("free product"), "{e}");
        assert!(classify(6, 6, 1).is_err());
    }

    #[test]
    fn t5_examples() {
        assert!(is_t5(5, 1, 2));
        assert!(!is_t5(8, 1, 2));
        assert!(is_t5(10, 7, 1));
    }

    #[test]
    fn t6_examples() {
        assert!(is_t6_generic(11, 4, 1));
        assert!(is_t6_generic(12, 6, 1));
        for n in 8..40 {
            assert!(!is_t6_generic(n, 1, 2));
        }
    }

    #[test]
    fn t6_generic_is_profile_minus_half_sum() {
        for n in 8..50u32 {
            for m in 1..n {
                for k in 1..n {
                    if m == k || params::derive(n, m, k).unwrap().gcd > 1 {
                        continue;
                    }
                    let p = params::derive(n, m, k).unwrap();
                    let expect = t6_profile(n, m, k) && !params::is_half((p.a + p.b) % n, n);
                    assert_eq!(is_t6_generic(n, m, k), expect, "({n},{m},{k})");
                }
            }
        }
    }

    #[test]
    fn family_status_examples() {
        let f = family_status(StatusFamily::Fibonacci, 7).unwrap();
        assert_eq!((f.hyperbolicity, f.order), (Hyperbolicity::Finite, Some(BigUint::from(29u32))));
        let s = family_status(StatusFamily::Sieradski, 6).unwrap();
        assert_eq!(s.hyperbolicity, Hyperbolicity::NotHyperbolic);
        assert_eq!(s.tits, Tits::VirtuallySolvable("metabelian".into()));
        let h = family_status(StatusFamily::GilbertHowie3, 7).unwrap();
        assert_eq!(h.tits, Tits::VirtuallySolvable("virtually Z^8".into()));
        let g = family_status(StatusFamily::HalfShiftGH, 10).unwrap();
        assert_eq!((g.hyperbolicity, g.tits), (Hyperbolicity::NotHyperbolic, Tits::FreeSubgroupOnly));
        assert!(family_status(StatusFamily::HalfShiftGH, 9).is_err());
        assert!(family_status(StatusFamily::Fibonacci, 1).is_err());
    }

    #[test]
    fn family_status_agrees_with_class_rows() {
        for r in CLASS_ROWS {
            let fam = match r.kind {
                RowKind::Fibonacci => StatusFamily::Fibonacci,
                RowKind::Sieradski => StatusFamily::Sieradski,
                RowKind::GilbertHowie3 => StatusFamily::GilbertHowie3,
                _ if r.m == r.n / 2 + 2 && r.k == 1 && r.n % 2 == 0 => StatusFamily::HalfShiftGH,
                _ => continue,
            };
            let s = family_status(fam, r.n).unwrap();
            assert_eq!(s.hyperbolicity, r.hyperbolicity(), "{}", r.name);
            assert_eq!(s.tits, r.tits(), "{}", r.name);
            if let TableOrder::Finite(o) = r.order {
                assert_eq!(s.order, Some(BigUint::from(o)));
            }
        }
    }

    #[test]
    fn class_table_covers_every_parameter() {
        for n in 3..=12u32 {
            let rows = class_rows(n).unwrap();
            let keys: std::collections::BTreeSet<_> = rows.iter().map(|r| r.key()).collect();
            assert_eq!(keys.len(), rows.len(), "duplicate keys at n={n}");
            for m in 1..n {
                for k in 1..n {
                    if m == k {
                        continue;
                    }
                    let p = params::derive(n, m, k).unwrap();
                    if p.gcd > 1 {
                        continue;
                    }
                    let key = params::canonicalize(&p).unwrap();
                    assert!(keys.contains(&key), "({n},{m},{k}) key {key:?}");
                }
            }
        }
        assert!(class_rows(13).is_err());
    }

    #[test]
    fn cyclic_rows_match_closed_forms() {
        for r in CLASS_ROWS.iter().filter(|r| r.kind == RowKind::Cyclic) {
            let p = params::derive(r.n, r.m, r.k).unwrap();
            assert!(params::is_half(p.a, r.n) || params::is_half(p.b, r.n), "{}", r.name);
            let TableOrder::Finite(o) = r.order else { panic!() };
            assert_eq!(order_half_residue(r.n, r.m), BigUint::from(o), "{}", r.name);
        }
    }

    #[test]
    fn congruence_table_shape() {
        let rows = congruence_table(20).unwrap();
        assert_eq!(rows.len(), 8);
        let total: usize = rows.iter().map(|r| r.count).sum();
        let expect = (0..20u32)
            .flat_map(|m| (1..20u32).map(move |k| (m, k)))
            .filter(|&(m, k)| m != k && params::derive(20, m, k).unwrap().gcd == 1)
            .count();
        assert_eq!(total, expect);
        assert!(rows.iter().all(|r| r.count > 0));
        assert_eq!(congruence_table(13).unwrap()[0].count, 0);
        assert!(congruence_table(12).is_err());
    }

    proptest! {
        #[test]
        fn orbit_invariance(n in 2u32..45, m in 0u32..45, k in 0u32..45, c in 1u32..45) {
            let (m, k) = (m % n, k % n);
            let p = params::derive(n, m, k).unwrap();
            prop_assume!(p.gcd == 1);
            let base = classify(n, m, k).unwrap().verdict();
            let s = params::swap_iso(&p);
            prop_assert_eq!(classify(n, s.m, s.k).unwrap().verdict(), base.clone());
            if let Ok(r) = params::rescale_iso(&p, c) {
                prop_assert_eq!(classify(n, r.m, r.k).unwrap().verdict(), base);
            }
        }

        #[test]
        fn finite_iff_finite_hyperbolicity(n in 2u32..45, m in 0u32..45, k in 0u32..45) {
            let (m, k) = (m % n, k % n);
            prop_assume!(params::derive(n, m, k).unwrap().gcd == 1);
            let x = classify(n, m, k).unwrap();
            prop_assert_eq!(x.is_finite(), x.order.is_some());
            prop_assert_eq!(x.tits == Tits::Finite, x.is_finite());
            if x.family.is_finite() {
                prop_assert!(x.is_finite());
            }
        }
    }
}
