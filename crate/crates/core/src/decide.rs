//! Decision procedures for isometric and isomorphic embeddings of `C(L)`
//! into `C(K)`, with certificates where the witness can be built.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde_json::{json, Value};

use crate::cardinal::{card_le, Cardinal, Truth3};
use crate::error::{Error, Result};
use crate::ordinal::{gamma_of, ExtendedOrdinal, GammaNumber, Ordinal};
use crate::space::{card_of, derived_card, height, ms_normal_form, profile, rel_cellularity, AtomKind, Space};
use crate::synthesis::{
    synth_cantor_embedding, synth_cantor_sum_surjection, synth_cantor_surjection, synth_interval_embedding,
    synth_onepoint_embedding, synth_surjection, Operator, Region, SurjectionMap,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Answer {
    Yes,
    No,
    Independent,
    Unknown,
}

impl Answer {
    pub fn as_str(self) -> &'static str {
        match self {
            Answer::Yes => "yes",
            Answer::No => "no",
            Answer::Independent => "independent",
            Answer::Unknown => "unknown",
        }
    }
}

impl From<Truth3> for Answer {
    fn from(t: Truth3) -> Answer {
        match t {
            Truth3::Yes => Answer::Yes,
            Truth3::No => Answer::No,
            Truth3::Independent => Answer::Independent,
        }
    }
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug)]
pub enum Certificate {
    Operator(Operator),
    Surjection(SurjectionMap),
    Refuter(String),
}

impl Certificate {
    pub fn to_json(&self) -> Value {
        match self {
            Certificate::Operator(t) => json!({ "operator": t.to_json() }),
            Certificate::Surjection(r) => json!({ "surjection": r.to_json() }),
            Certificate::Refuter(s) => json!({ "refuter": s }),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub answer: Answer,
    pub rule: String,
    pub certificate: Option<Certificate>,
}

impl Verdict {
    fn new(answer: impl Into<Answer>, rule: impl Into<String>) -> Verdict {
        Verdict { answer: answer.into(), rule: rule.into(), certificate: None }
    }

    fn refuted(rule: impl Into<String>, why: String) -> Verdict {
        Verdict { answer: Answer::No, rule: rule.into(), certificate: Some(Certificate::Refuter(why)) }
    }

    fn with(mut self, cert: Option<Certificate>) -> Verdict {
        if cert.is_some() {
            self.certificate = cert;
        }
        self
    }

    /// `{"answer", "rule", "certificate"}`; the certificate is given as the
    /// path it was written to, if any.
    pub fn to_json(&self, cert_path: Option<&str>) -> Value {
        let cert = match (&self.certificate, cert_path) {
            (_, Some(p)) => json!(p),
            (Some(Certificate::Refuter(s)), None) => json!({ "refuter": s }),
            _ => Value::Null,
        };
        json!({ "answer": self.answer.as_str(), "rule": self.rule, "certificate": cert })
    }
}

/// `Sz(C(K)) = Γ(ht(K))`.
pub fn szlenk_of(k: &Space) -> GammaNumber {
    gamma_of(&height(k))
}

fn scattered(s: &Space) -> bool {
    height(s) != ExtendedOrdinal::Infinity
}

fn synthesizable(k: &Space) -> bool {
    k.constructive() && k.zero_dimensional()
}

/// Condition (iv): nonscattered `L` needs nonscattered `K`; scattered `L`
/// needs `|L^(ht(L)-1)| <= |K^(ht(L)-1)|`.
fn condition_iv(l: &Space, k: &Space, ch: bool) -> Verdict {
    if !scattered(l) {
        return if scattered(k) {
            Verdict::refuted("iv", format!("{l} is not scattered but {k} is"))
        } else {
            Verdict::new(Answer::Yes, "iv")
        };
    }
    let Some(top) = height(l).pred() else { return Verdict::new(Answer::Yes, "iv") };
    let (a, b) = (derived_card(l, &top), derived_card(k, &top));
    let t = card_le(a, b, ch);
    if t == Truth3::No {
        return Verdict::refuted("iv", format!("|L^({top})| = {a} > {b} = |K^({top})|"));
    }
    Verdict::new(t, "iv")
}

/// Witness for a scattered metrizable `L` inside a synthesizable `K`.
fn interval_certificate(l: &Space, k: &Space) -> Option<Certificate> {
    if !synthesizable(k) {
        return None;
    }
    let (alpha, m) = ms_normal_form(l).ok()?;
    synth_interval_embedding(k, &alpha, m, &Region::Whole).ok().map(Certificate::Operator)
}

/// Isometric embeddability of `C(L)` into `C(K)` for metrizable `L`.
pub fn isometric_embeds(l: &Space, k: &Space, assume_ch: bool) -> Result<Verdict> {
    if !l.metrizable() {
        return Err(Error::NotMetrizable(l.to_string()));
    }
    let v = condition_iv(l, k, assume_ch);
    if v.answer != Answer::Yes {
        return Ok(v);
    }
    if l.is_empty() {
        return Ok(Verdict::new(Answer::Yes, "iv: empty L"));
    }
    if !scattered(l) {
        if *l == Space::Cantor && synthesizable(k) {
            let t = synth_cantor_embedding(k, &Region::Whole)?;
            return Ok(Verdict::new(Answer::Yes, "iv: Cantor surjection").with(Some(Certificate::Operator(t))));
        }
        return Ok(Verdict::new(Answer::Yes, "Rosenthal-2.8/Miljutin (decision-only)"));
    }
    let cert = interval_certificate(l, k);
    if cert.is_none() && !scattered(k) {
        return Ok(Verdict::new(Answer::Yes, "Rosenthal-2.8/Miljutin (decision-only)"));
    }
    Ok(v.with(cert))
}

/// Isomorphic embeddability of `C(L)` into `C(K)` for metrizable `L`.
pub fn isomorphic_embeds(l: &Space, k: &Space) -> Result<Verdict> {
    if !l.metrizable() {
        return Err(Error::NotMetrizable(l.to_string()));
    }
    // A finite L gives a finite-dimensional C(L): only the dimension counts.
    if let Cardinal::Finite(n) = card_of(l) {
        let ok = card_le(Cardinal::Finite(n), card_of(k), false);
        let mut v = Verdict::new(ok, "dimension");
        if ok == Truth3::Yes && n > 0 && synthesizable(k) {
            v = v.with(synth_interval_embedding(k, &Ordinal::zero(), n, &Region::Whole).ok().map(Certificate::Operator));
        }
        return Ok(v);
    }
    let (sl, sk) = (szlenk_of(l), szlenk_of(k));
    if sl.value() > sk.value() {
        return Ok(Verdict::refuted("szlenk", format!("Sz(C(L)) = {} > {} = Sz(C(K))", sl.value(), sk.value())));
    }
    let mut v = Verdict::new(Answer::Yes, "szlenk");
    if scattered(l) && synthesizable(k) {
        // C(L) is isomorphic to C([1, w^(w^a)]) where w^a is the leading
        // power of the Mazurkiewicz–Sierpiński exponent.
        if let Ok((beta, _)) = ms_normal_form(l) {
            let lead = beta.leading_exponent().expect("infinite L has a positive exponent");
            let target = Ordinal::omega_pow(lead);
            v = v.with(synth_interval_embedding(k, &target, 1, &Region::Whole).ok().map(Certificate::Operator));
        }
    }
    Ok(v)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Condition {
    Ii,
    Iii,
    Iv,
    CellNecessary,
}

impl FromStr for Condition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Condition> {
        match s {
            "ii" => Ok(Condition::Ii),
            "iii" => Ok(Condition::Iii),
            "iv" => Ok(Condition::Iv),
            "cell_necessary" => Ok(Condition::CellNecessary),
            _ => Err(Error::Unsupported(format!("condition {s}"))),
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Condition::Ii => "ii",
            Condition::Iii => "iii",
            Condition::Iv => "iv",
            Condition::CellNecessary => "cell_necessary",
        })
    }
}

/// Orders where either profile may change, plus the perfect kernel.
fn orders(l: &Space, k: &Space) -> BTreeSet<ExtendedOrdinal> {
    let mut out: BTreeSet<ExtendedOrdinal> = BTreeSet::new();
    for s in [l, k] {
        out.extend(profile(s).entries.into_iter().map(|e| e.start));
    }
    out.insert(ExtendedOrdinal::Infinity);
    out
}

fn condition_iii(l: &Space, k: &Space, ch: bool) -> Verdict {
    let mut acc = Truth3::Yes;
    for o in orders(l, k) {
        let (a, b) = (derived_card(l, &o), derived_card(k, &o));
        let t = card_le(a, b, ch);
        if t == Truth3::No {
            return Verdict::refuted("iii", format!("alpha={o}: |L^(alpha)| = {a} > {b} = |K^(alpha)|"));
        }
        acc = acc.and(t);
    }
    Verdict::new(acc, "iii")
}

/// Necessary conditions for a closed subset of `K` to map onto `L`: the
/// height bound and the relative cellularity bound at every order.
fn cell_necessary(l: &Space, k: &Space, ch: bool) -> Verdict {
    if height(l) > height(k) {
        return Verdict::refuted("height", format!("ht(L) = {} > {} = ht(K)", height(l), height(k)));
    }
    let mut acc = Truth3::Yes;
    for o in orders(l, k) {
        let (a, b) = (rel_cellularity(l, &o), rel_cellularity(k, &o));
        let t = card_le(a, b, ch);
        if t == Truth3::No {
            let rule = if o == ExtendedOrdinal::Ord(Ordinal::zero()) { "ccc" } else { "cellularity" };
            return Verdict::refuted(rule, format!("alpha={o}: c(L^(alpha), L) = {a} > {b} = c(K^(alpha), K)"));
        }
        acc = acc.and(t);
    }
    Verdict::new(acc, "cell_necessary")
}

fn condition_ii(l: &Space, k: &Space, ch: bool) -> Verdict {
    let nec = cell_necessary(l, k, ch);
    if nec.answer == Answer::No {
        return nec;
    }
    let iii = condition_iii(l, k, ch);
    if iii.answer == Answer::No {
        return iii;
    }
    if synthesizable(k) {
        if let Ok((alpha, m)) = ms_normal_form(l) {
            if let Ok(rho) = synth_surjection(k, &alpha, m, &Region::Whole) {
                return Verdict::new(Answer::Yes, "ii: synthesized surjection")
                    .with(Some(Certificate::Surjection(rho)));
            }
        }
        if *l == Space::Cantor {
            if let Ok(rho) = synth_cantor_surjection(k, &Region::Whole) {
                return Verdict::new(Answer::Yes, "ii: Cantor surjection").with(Some(Certificate::Surjection(rho)));
            }
        }
    }
    if l.metrizable() {
        let iv = condition_iv(l, k, ch);
        return Verdict { rule: "ii<=>iv (metrizable L)".into(), ..iv };
    }
    Verdict::new(Answer::Unknown, "ii: nonmetrizable L")
}

pub fn check_condition(cond: Condition, l: &Space, k: &Space, assume_ch: bool) -> Verdict {
    match cond {
        Condition::Ii => condition_ii(l, k, assume_ch),
        Condition::Iii => condition_iii(l, k, assume_ch),
        Condition::Iv => condition_iv(l, k, assume_ch),
        Condition::CellNecessary => cell_necessary(l, k, assume_ch),
    }
}

/// `c(K^(order), K)` and the largest `n <= cap` with a built witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellularityBound {
    pub value: Cardinal,
    pub witness_max: u64,
    /// Whether the witness for `witness_max + 1` was tried and failed.
    pub next_fails: bool,
}

fn cellular_witness(k: &Space, order: &ExtendedOrdinal, n: u64) -> bool {
    match order {
        ExtendedOrdinal::Ord(a) => synth_onepoint_embedding(k, n, a).is_ok(),
        ExtendedOrdinal::Infinity => synth_cantor_sum_surjection(k, n).is_ok(),
        ExtendedOrdinal::Beyond(_) => false,
    }
}

pub fn cellularity_bound(k: &Space, order: &ExtendedOrdinal, cap: u64) -> CellularityBound {
    let value = rel_cellularity(k, order);
    let mut witness_max = 0;
    if synthesizable(k) {
        while witness_max < cap && cellular_witness(k, order, witness_max + 1) {
            witness_max += 1;
        }
    }
    let next_fails = synthesizable(k) && !cellular_witness(k, order, witness_max + 1);
    CellularityBound { value, witness_max, next_fails }
}

/// One row of the implications regression table.
#[derive(Clone, Debug)]
pub struct RegressionRow {
    pub k: Space,
    pub l: Space,
    pub condition: &'static str,
    pub expected: Answer,
    pub expected_rule: &'static str,
    pub verdict: Verdict,
}

/// The counterexamples to reversed implications for nonmetrizable `L`.
pub fn regression_table(assume_ch: bool) -> Vec<RegressionRow> {
    let unit = Space::Unit;
    let row = |l: Space, cond: Condition, expected, expected_rule| RegressionRow {
        verdict: check_condition(cond, &l, &unit, assume_ch),
        k: unit.clone(),
        l,
        condition: match cond {
            Condition::Ii => "ii",
            Condition::Iii => "iii",
            Condition::Iv => "iv",
            Condition::CellNecessary => "cell_necessary",
        },
        expected,
        expected_rule,
    };
    let omega1 = Space::atom(AtomKind::OmegaOne);
    let remainder = Space::atom(AtomKind::BetaNMinusN);
    let big = Space::atom(AtomKind::InitialTwoToC);
    vec![
        row(omega1.clone(), Condition::Iv, Answer::Yes, "iv"),
        row(omega1, Condition::Ii, Answer::No, "ccc"),
        row(remainder.clone(), Condition::Iv, Answer::Yes, "iv"),
        row(remainder, Condition::Iii, Answer::No, "iii"),
        row(big.clone(), Condition::Iv, Answer::Yes, "iv"),
        row(big, Condition::Iii, Answer::No, "iii"),
        RegressionRow {
            k: unit.clone(),
            l: Space::Unit,
            condition: "vi=>i",
            expected: Answer::Unknown,
            expected_rule: "unknown-by-design",
            verdict: Verdict::new(Answer::Unknown, "unknown-by-design"),
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(s: &str) -> Space {
        s.parse().unwrap()
    }

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    #[test]
    fn szlenk_examples() {
        assert_eq!(szlenk_of(&sp("I(w,1)")).value().to_string(), "w^(2)");
        assert_eq!(szlenk_of(&sp("unit")).value(), &ExtendedOrdinal::Infinity);
        assert_eq!(szlenk_of(&sp("fin(7)")).value(), &ExtendedOrdinal::Ord(Ordinal::one()));
    }

    #[test]
    fn isometric_examples() {
        let v = isometric_embeds(&sp("I(w,1)"), &sp("sum(I(w,2),fin(3))"), false).unwrap();
        assert_eq!(v.answer, Answer::Yes);
        assert!(matches!(v.certificate, Some(Certificate::Operator(_))));
        assert_eq!(isometric_embeds(&sp("cantor"), &sp("I(5,1)"), false).unwrap().answer, Answer::No);
        assert_eq!(isometric_embeds(&sp("I(0,2)"), &sp("fin(1)"), false).unwrap().answer, Answer::No);
        assert!(matches!(
            isometric_embeds(&Space::atom(AtomKind::OmegaOne), &sp("unit"), false),
            Err(Error::NotMetrizable(_))
        ));
        let v = isometric_embeds(&sp("unit"), &sp("sum(unit,fin(1))"), false).unwrap();
        assert_eq!(v.rule, "Rosenthal-2.8/Miljutin (decision-only)");
        let v = isometric_embeds(&sp("I(w,1)"), &sp("unit"), false).unwrap();
        assert_eq!((v.answer, v.rule.as_str()), (Answer::Yes, "Rosenthal-2.8/Miljutin (decision-only)"));
    }

    #[test]
    fn isomorphic_examples() {
        let v = isomorphic_embeds(&sp("I(2,1)"), &sp("I(w,1)")).unwrap();
        assert_eq!(v.answer, Answer::Yes);
        assert!(v.certificate.is_some());
        assert_eq!(isomorphic_embeds(&sp("unit"), &sp("I(w^(w^(1)),5)")).unwrap().answer, Answer::No);
        assert_eq!(isomorphic_embeds(&sp("I(1,1)"), &sp("fin(9)")).unwrap().answer, Answer::No);
        assert_eq!(isomorphic_embeds(&sp("fin(5)"), &sp("fin(2)")).unwrap().answer, Answer::No);
        assert_eq!(isomorphic_embeds(&sp("fin(2)"), &sp("fin(5)")).unwrap().answer, Answer::Yes);
    }

    #[test]
    fn cellularity_examples() {
        let k = sp("sum(I(2,1),I(2,1),I(2,1),fin(2))");
        let b = cellularity_bound(&k, &ExtendedOrdinal::Ord(o("2")), 6);
        assert_eq!((b.value, b.witness_max, b.next_fails), (Cardinal::Finite(3), 3, true));
        let b = cellularity_bound(&sp("I(2,1)"), &ExtendedOrdinal::Ord(o("3")), 6);
        assert_eq!((b.value, b.witness_max), (Cardinal::Finite(0), 0));
    }

    #[test]
    fn regression_rows_hold_with_and_without_ch() {
        for ch in [false, true] {
            for row in regression_table(ch) {
                assert_eq!(row.verdict.answer, row.expected, "{} {} {}", row.condition, row.l, ch);
                assert_eq!(row.verdict.rule, row.expected_rule);
            }
        }
    }

    #[test]
    fn iii_monotone_and_agrees_with_iv() {
        let v = check_condition(Condition::Iii, &sp("I(2,2)"), &sp("I(2,3)"), false);
        assert_eq!(v.answer, Answer::Yes);
        for (l, k) in [("I(w,1)", "I(w,2)"), ("I(3,2)", "I(3,1)"), ("cantor", "I(3,1)")] {
            let (l, k) = (sp(l), sp(k));
            let a = isometric_embeds(&l, &k, false).unwrap().answer;
            assert_eq!(a, check_condition(Condition::Iv, &l, &k, false).answer);
            if a == Answer::Yes {
                assert_eq!(isomorphic_embeds(&l, &k).unwrap().answer, Answer::Yes);
            }
        }
    }
}
