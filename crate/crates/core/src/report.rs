//! Verification reports and the JSON / CSV / table renderings of witnesses.
//!
//! JSON layout:
//!
//! ```text
//! { "query":   { "g", "r", "s", "sign", "tilde" },
//!   "lattice": { "d", "mu" } | null,
//!   "witnesses": [ { "d", "mu", "sign", "x", "y", "D": {"x","y"}, "F": {"x","y"},
//!                    "F2", "FdotH", "DdotH", "pell_residual",
//!                    "bb": {"eps", "q", "b"}, "checks": { name: bool, ... } } ] }
//! ```
//!
//! Integers that do not fit in an `i64` are written as decimal strings.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::family::{FamilyQuery, Witness};
use crate::mukai::Sign;

pub mod bigint {
    use std::str::FromStr;

    use num_bigint::BigInt;
    use serde::de::{self, Visitor};
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        match i64::try_from(v) {
            Ok(small) => s.serialize_i64(small),
            Err(_) => s.serialize_str(&v.to_string()),
        }
    }

    struct BigIntVisitor;

    impl Visitor<'_> for BigIntVisitor {
        type Value = BigInt;

        fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
            f.write_str("an integer or a decimal string")
        }

        fn visit_i64<E: de::Error>(self, v: i64) -> Result<BigInt, E> {
            Ok(v.into())
        }

        fn visit_u64<E: de::Error>(self, v: u64) -> Result<BigInt, E> {
            Ok(v.into())
        }

        fn visit_str<E: de::Error>(self, v: &str) -> Result<BigInt, E> {
            BigInt::from_str(v).map_err(E::custom)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        d.deserialize_any(BigIntVisitor)
    }

    /// The same encoding as a free-standing JSON value.
    pub fn to_value(v: &BigInt) -> serde_json::Value {
        match i64::try_from(v) {
            Ok(small) => small.into(),
            Err(_) => v.to_string().into(),
        }
    }

    pub mod option {
        use super::*;
        use serde::{Deserialize, Serialize};

        #[derive(Serialize, Deserialize)]
        struct Wrap(#[serde(with = "super")] BigInt);

        pub fn serialize<S: Serializer>(v: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
            v.as_ref().map(|b| Wrap(b.clone())).serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigInt>, D::Error> {
            Ok(Option::<Wrap>::deserialize(d)?.map(|w| w.0))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Equal,
    Congruent,
    AtMost,
}

/// One recomputed identity with the integers that were compared.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub passed: bool,
    pub relation: Relation,
    #[serde(with = "bigint")]
    pub computed: BigInt,
    #[serde(with = "bigint")]
    pub expected: BigInt,
    #[serde(
        with = "bigint::option",
        default,
        skip_serializing_if = "Option::is_none"
    )]
    pub modulus: Option<BigInt>,
}

impl Check {
    pub fn equal(computed: BigInt, expected: BigInt) -> Self {
        Self {
            passed: computed == expected,
            relation: Relation::Equal,
            computed,
            expected,
            modulus: None,
        }
    }

    pub fn congruent(computed: BigInt, expected: BigInt, modulus: BigInt) -> Self {
        Self {
            passed: crate::arith::congruent(&computed, &expected, &modulus),
            relation: Relation::Congruent,
            computed,
            expected,
            modulus: Some(modulus),
        }
    }

    pub fn at_most(computed: BigInt, bound: BigInt) -> Self {
        Self {
            passed: computed <= bound,
            relation: Relation::AtMost,
            computed,
            expected: bound,
            modulus: None,
        }
    }

    /// A check whose inputs could not even be formed.
    pub fn failed(relation: Relation, computed: BigInt, expected: BigInt) -> Self {
        Self {
            passed: false,
            relation,
            computed,
            expected,
            modulus: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    /// `u^2 - d w^2 - N`, expected zero.
    pub pell_residual: Check,
    /// `x = mu y (mod 2g-2)`.
    pub congruence: Check,
    /// `F^2 = (2g-2) + r(+-2 - 2s)`.
    pub f_square: Check,
    /// `F.H = r mu y (mod 2g-2)`.
    pub f_dot_h: Check,
    /// `D.H <= x_threshold`.
    pub threshold: Check,
    /// Last component of `T_D(r, H, s)`, expected `+-1`; passes only if the
    /// whole vector equals `(r, F, +-1)`.
    pub type_vector: Check,
    /// gcd of the coordinates of `(r, H, s)`.
    pub primitive: Check,
    /// `q(F + eps f) = +-2r`.
    pub bb_square: Check,
    /// `b(F + eps f, H) = r mu y (mod 2g-2)`.
    pub bb_pairing: Check,
}

impl VerificationReport {
    pub fn entries(&self) -> [(&'static str, &Check); 9] {
        [
            ("pell_residual", &self.pell_residual),
            ("congruence", &self.congruence),
            ("f_square", &self.f_square),
            ("f_dot_h", &self.f_dot_h),
            ("threshold", &self.threshold),
            ("type_vector", &self.type_vector),
            ("primitive", &self.primitive),
            ("bb_square", &self.bb_square),
            ("bb_pairing", &self.bb_pairing),
        ]
    }

    pub fn all_passed(&self) -> bool {
        self.entries().iter().all(|(_, c)| c.passed)
    }

    pub fn failures(&self) -> Vec<&'static str> {
        self.entries()
            .iter()
            .filter(|(_, c)| !c.passed)
            .map(|(name, _)| *name)
            .collect()
    }

    pub fn flags(&self) -> BTreeMap<String, bool> {
        self.entries()
            .iter()
            .map(|(name, c)| (name.to_string(), c.passed))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryRecord {
    pub g: i64,
    pub r: i64,
    pub s: i64,
    /// `plus`, `minus` or `both`.
    pub sign: String,
    pub tilde: bool,
}

impl QueryRecord {
    pub fn from_query(q: &FamilyQuery) -> Self {
        Self::with_sign_label(q, q.sign.to_string())
    }

    /// For runs that merge both signs.
    pub fn with_sign_label(q: &FamilyQuery, sign: impl Into<String>) -> Self {
        Self {
            g: q.g,
            r: q.r,
            s: q.s,
            sign: sign.into(),
            tilde: q.tilde,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeRecord {
    pub d: i64,
    pub mu: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coords {
    #[serde(with = "bigint")]
    pub x: BigInt,
    #[serde(with = "bigint")]
    pub y: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BbRecord {
    pub eps: i64,
    #[serde(with = "bigint")]
    pub q: BigInt,
    #[serde(with = "bigint")]
    pub b: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub d: i64,
    pub mu: i64,
    pub sign: Sign,
    #[serde(with = "bigint")]
    pub x: BigInt,
    #[serde(with = "bigint")]
    pub y: BigInt,
    #[serde(rename = "D")]
    pub twist: Coords,
    #[serde(rename = "F")]
    pub f: Coords,
    #[serde(rename = "F2", with = "bigint")]
    pub f_square: BigInt,
    #[serde(rename = "FdotH", with = "bigint")]
    pub f_dot_h: BigInt,
    #[serde(rename = "DdotH", with = "bigint")]
    pub d_dot_h: BigInt,
    #[serde(with = "bigint")]
    pub pell_residual: BigInt,
    pub bb: BbRecord,
    pub checks: BTreeMap<String, bool>,
}

impl WitnessRecord {
    pub fn from_witness(w: &Witness) -> Self {
        let r = &w.report;
        Self {
            d: w.lattice.discriminant(),
            mu: w.lattice.mu(),
            sign: w.query.sign,
            x: w.x.clone(),
            y: w.y.clone(),
            twist: Coords {
                x: w.x.clone(),
                y: w.y.clone(),
            },
            f: Coords {
                x: w.f.0.clone(),
                y: w.f.1.clone(),
            },
            f_square: r.f_square.computed.clone(),
            f_dot_h: r.f_dot_h.computed.clone(),
            d_dot_h: r.threshold.computed.clone(),
            pell_residual: r.pell_residual.computed.clone(),
            bb: BbRecord {
                eps: w.eps(),
                q: r.bb_square.computed.clone(),
                b: r.bb_pairing.computed.clone(),
            },
            checks: r.flags(),
        }
    }

    /// Rebuilds and re-verifies the witness under `query`'s shape.
    pub fn to_witness(&self, query: &FamilyQuery, x_threshold: Option<BigInt>) -> Result<Witness> {
        let q = FamilyQuery {
            sign: self.sign,
            ..*query
        };
        let lattice = crate::lattice::make_lattice(q.g, self.d, self.mu)?;
        let threshold = x_threshold.unwrap_or_else(|| q.equation(lattice).default_x_threshold());
        Ok(Witness::assemble(
            q,
            lattice,
            (self.twist.x.clone(), self.twist.y.clone()),
            (self.f.x.clone(), self.f.y.clone()),
            threshold,
        ))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub query: QueryRecord,
    pub lattice: Option<LatticeRecord>,
    pub witnesses: Vec<WitnessRecord>,
}

impl Document {
    pub fn new(query: QueryRecord, lattice: Option<LatticeRecord>, witnesses: &[Witness]) -> Self {
        Self {
            query,
            lattice,
            witnesses: witnesses.iter().map(WitnessRecord::from_witness).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn to_csv(&self) -> String {
        let mut wtr = csv::Writer::from_writer(Vec::new());
        let check_names: Vec<&str> = self
            .witnesses
            .first()
            .map(|w| w.checks.keys().map(String::as_str).collect())
            .unwrap_or_default();
        let mut header: Vec<String> = [
            "g",
            "r",
            "s",
            "tilde",
            "d",
            "mu",
            "sign",
            "x",
            "y",
            "D_x",
            "D_y",
            "F_x",
            "F_y",
            "F2",
            "FdotH",
            "DdotH",
            "pell_residual",
            "eps",
            "q",
            "b",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect();
        header.extend(check_names.iter().map(|c| format!("check_{c}")));
        wtr.write_record(&header).expect("in-memory write");
        for w in &self.witnesses {
            let mut row = vec![
                self.query.g.to_string(),
                self.query.r.to_string(),
                self.query.s.to_string(),
                self.query.tilde.to_string(),
                w.d.to_string(),
                w.mu.to_string(),
                w.sign.to_string(),
                w.x.to_string(),
                w.y.to_string(),
                w.twist.x.to_string(),
                w.twist.y.to_string(),
                w.f.x.to_string(),
                w.f.y.to_string(),
                w.f_square.to_string(),
                w.f_dot_h.to_string(),
                w.d_dot_h.to_string(),
                w.pell_residual.to_string(),
                w.bb.eps.to_string(),
                w.bb.q.to_string(),
                w.bb.b.to_string(),
            ];
            row.extend(check_names.iter().map(|c| w.checks[*c].to_string()));
            wtr.write_record(&row).expect("in-memory write");
        }
        String::from_utf8(wtr.into_inner().expect("flush")).expect("utf8")
    }

    pub fn to_table(&self) -> String {
        let q = &self.query;
        let mut out = String::new();
        let family = if q.tilde { "tilde-D" } else { "D" };
        let _ = writeln!(
            out,
            "# v = ({}, H, {}), g = {}, family {}, sign {}",
            q.r, q.s, q.g, family, q.sign
        );
        let headers = [
            "d", "mu", "sign", "x", "y", "F^2", "F.H", "q(h)", "b(h,H)", "ok",
        ];
        let rows: Vec<[String; 10]> = self
            .witnesses
            .iter()
            .map(|w| {
                [
                    w.d.to_string(),
                    w.mu.to_string(),
                    match w.sign {
                        Sign::Plus => "+".into(),
                        Sign::Minus => "-".into(),
                    },
                    w.x.to_string(),
                    w.y.to_string(),
                    w.f_square.to_string(),
                    w.f_dot_h.to_string(),
                    w.bb.q.to_string(),
                    w.bb.b.to_string(),
                    if w.checks.values().all(|&b| b) {
                        "yes".into()
                    } else {
                        let failed: Vec<&str> = w
                            .checks
                            .iter()
                            .filter(|(_, &ok)| !ok)
                            .map(|(k, _)| k.as_str())
                            .collect();
                        format!("no ({})", failed.join(","))
                    },
                ]
            })
            .collect();
        let mut widths = headers.map(str::len);
        for row in &rows {
            for (i, cell) in row.iter().enumerate() {
                widths[i] = widths[i].max(cell.len());
            }
        }
        let line = |cells: Vec<&str>| {
            cells
                .iter()
                .enumerate()
                .map(|(i, c)| format!("{:>w$}", c, w = widths[i]))
                .collect::<Vec<_>>()
                .join("  ")
        };
        let _ = writeln!(out, "{}", line(headers.to_vec()));
        for row in &rows {
            let _ = writeln!(out, "{}", line(row.iter().map(String::as_str).collect()));
        }
        if rows.is_empty() {
            let _ = writeln!(out, "(no witnesses)");
        }
        out
    }
}
