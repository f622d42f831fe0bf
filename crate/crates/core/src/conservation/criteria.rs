//! Arithmetic check of the helicity-conservation hypotheses against measured
//! regularity. The torus has finite measure, so membership at an exponent
//! implies membership at every smaller one, in time and in space.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Slack in every exponent comparison.
pub const CRITERIA_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Summability {
    /// `Ḃ^s_{p,∞}`: compensated block norms bounded.
    #[serde(rename = "infinity", alias = "inf", alias = "infinity_type")]
    Infinity,
    /// `Ḃ^s_{p,c(ℕ)}`: compensated block norms tend to zero.
    #[serde(rename = "cN", alias = "cn", alias = "cN_type", alias = "cn_type")]
    CN,
}

impl Summability {
    fn symbol(&self) -> &'static str {
        match self {
            Summability::Infinity => "∞",
            Summability::CN => "c(ℕ)",
        }
    }
}

/// Exponents that may be infinite serialize as the string `"inf"`.
mod exponent {
    use super::*;

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if x.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(*x)
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Num(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Raw::deserialize(d)? {
            Raw::Num(x) => Ok(x),
            Raw::Text(t) => match t.to_ascii_lowercase().as_str() {
                "inf" | "infinity" | "∞" => Ok(f64::INFINITY),
                other => other.parse().map_err(serde::de::Error::custom),
            },
        }
    }
}

/// Membership in `L^{time}(0,T; Ḃ^{exponent}_{integrability, summability})`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BesovMeasurement {
    pub exponent: f64,
    #[serde(with = "exponent")]
    pub integrability: f64,
    #[serde(with = "exponent")]
    pub time_integrability: f64,
    pub summability: Summability,
}

/// Membership in `L^{time}(0,T; L^{space})`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LebesgueMeasurement {
    #[serde(with = "exponent")]
    pub time: f64,
    #[serde(with = "exponent")]
    pub space: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RegularitySummary {
    pub dim: Option<usize>,
    pub velocity_besov: Option<BesovMeasurement>,
    pub vorticity_besov: Option<BesovMeasurement>,
    pub density_besov: Option<BesovMeasurement>,
    pub momentum_besov: Option<BesovMeasurement>,
    pub grad_theta_besov: Option<BesovMeasurement>,
    pub velocity_lebesgue: Option<LebesgueMeasurement>,
    pub vorticity_lebesgue: Option<LebesgueMeasurement>,
    pub divergence_lebesgue: Option<LebesgueMeasurement>,
    pub curl_vorticity_lebesgue: Option<LebesgueMeasurement>,
    pub grad_theta_lebesgue: Option<LebesgueMeasurement>,
    pub density_bounds: Option<(f64, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Satisfied,
    NotSatisfied,
    Indeterminate,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Satisfied => "SATISFIED",
            Verdict::NotSatisfied => "NOT SATISFIED",
            Verdict::Indeterminate => "INDETERMINATE",
        }
    }

    fn and(self, other: Verdict) -> Verdict {
        use Verdict::*;
        match (self, other) {
            (NotSatisfied, _) | (_, NotSatisfied) => NotSatisfied,
            (Indeterminate, _) | (_, Indeterminate) => Indeterminate,
            _ => Satisfied,
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TheoremId {
    CompressibleHelicity,
    IncompressibleHelicity,
    IncompressibleCorollary,
    SqgHelicity,
}

impl TheoremId {
    pub fn title(&self) -> &'static str {
        match self {
            TheoremId::CompressibleHelicity => "compressible Euler helicity",
            TheoremId::IncompressibleHelicity => "incompressible Euler helicity",
            TheoremId::IncompressibleCorollary => "incompressible Euler helicity, vorticity form",
            TheoremId::SqgHelicity => "SQG helicity",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClauseVerdict {
    pub theorem: TheoremId,
    pub clause: u8,
    pub statement: String,
    pub verdict: Verdict,
    /// Each comparison made, with the measured numbers substituted.
    pub arithmetic: Vec<String>,
    /// Why a comparison could not be made.
    pub missing: Vec<String>,
    /// Hypotheses with no discrete analog, taken as given.
    pub assumed: Vec<String>,
}

fn num(x: f64) -> String {
    if x.is_infinite() {
        return if x > 0.0 {
            "∞".into()
        } else {
            "−∞".into()
        };
    }
    let s = format!("{:.6}", x);
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

fn inv(x: f64) -> f64 {
    1.0 / x
}

/// Running conjunction of comparisons for one clause.
#[derive(Default)]
struct Check {
    verdict: Option<Verdict>,
    arithmetic: Vec<String>,
    missing: Vec<String>,
}

impl Check {
    fn push(&mut self, ok: bool, line: String) {
        let v = if ok {
            Verdict::Satisfied
        } else {
            Verdict::NotSatisfied
        };
        self.verdict = Some(self.verdict.map_or(v, |w| w.and(v)));
        self.arithmetic
            .push(format!("{line}: {}", if ok { "holds" } else { "fails" }));
    }

    fn missing(&mut self, what: String) {
        let v = Verdict::Indeterminate;
        self.verdict = Some(self.verdict.map_or(v, |w| w.and(v)));
        self.missing.push(what);
    }

    fn ge(&mut self, label: &str, value: f64, bound: f64) {
        self.push(
            value >= bound - CRITERIA_TOLERANCE,
            format!("{label} = {} ≥ {}", num(value), num(bound)),
        );
    }

    fn le(&mut self, label: &str, value: f64, bound: f64) {
        self.push(
            value <= bound + CRITERIA_TOLERANCE,
            format!("{label} = {} ≤ {}", num(value), num(bound)),
        );
    }

    /// `name ∈ L^time Ḃ^exponent_{integrability, summability}`.
    fn besov(
        &mut self,
        name: &str,
        m: Option<&BesovMeasurement>,
        exponent: f64,
        p: f64,
        time: f64,
        sum: Summability,
    ) {
        let Some(m) = m else {
            self.missing(format!("no Besov measurement for {name}"));
            return;
        };
        self.ge(
            &format!("time integrability of {name}"),
            m.time_integrability,
            time,
        );
        self.ge(
            &format!("spatial integrability of {name}"),
            m.integrability,
            p,
        );
        self.besov_exponent(name, m, exponent, sum);
    }

    fn besov_exponent(
        &mut self,
        name: &str,
        m: &BesovMeasurement,
        exponent: f64,
        sum: Summability,
    ) {
        let gap = m.exponent - exponent;
        if gap > CRITERIA_TOLERANCE || sum == Summability::Infinity {
            self.ge(&format!("regularity of {name}"), m.exponent, exponent);
        } else {
            let ok = gap >= -CRITERIA_TOLERANCE && m.summability == Summability::CN;
            self.push(
                ok,
                format!(
                    "{name} at the critical exponent {} needs c(ℕ) summability, measured {}",
                    num(exponent),
                    m.summability.symbol()
                ),
            );
        }
    }

    fn lebesgue(&mut self, name: &str, m: Option<&LebesgueMeasurement>, time: f64, space: f64) {
        let Some(m) = m else {
            self.missing(format!("no Lebesgue measurement for {name}"));
            return;
        };
        self.ge(&format!("time integrability of {name}"), m.time, time);
        self.ge(&format!("spatial integrability of {name}"), m.space, space);
    }

    fn dim3(&mut self, dim: Option<usize>) {
        match dim {
            Some(d) => self.push(d == 3, format!("d = {d}, required d = 3")),
            None => self.missing("dimension not given".into()),
        }
    }

    fn finish(
        self,
        theorem: TheoremId,
        clause: u8,
        statement: &str,
        assumed: Vec<String>,
    ) -> ClauseVerdict {
        ClauseVerdict {
            theorem,
            clause,
            statement: statement.into(),
            verdict: self.verdict.unwrap_or(Verdict::Indeterminate),
            arithmetic: self.arithmetic,
            missing: self.missing,
            assumed,
        }
    }
}

/// Two exponents `a` (for the factor measured in `L^a`) and `b` admit a
/// pair `2 < r ≤ a`, `r < ∞` with `r/(r−2) ≤ b`, i.e. `2/r + 1/b ≤ 1`.
fn dual_pair(c: &mut Check, label: &str, a: f64, b: f64, weight_a: f64, weight_b: f64) {
    let s = weight_a * inv(a) + weight_b * inv(b);
    let line = format!(
        "{label}: {}/{} + {}/{} = {} ≤ 1",
        num(weight_a),
        num(a),
        num(weight_b),
        num(b),
        num(s)
    );
    // With `a = ∞` the free exponent must stay finite, so equality is excluded.
    let ok = if a.is_infinite() {
        s < 1.0 - CRITERIA_TOLERANCE
    } else {
        s <= 1.0 + CRITERIA_TOLERANCE
    };
    c.push(ok, line);
}

fn pairing_assumption(dim: Option<usize>) -> String {
    let q = match dim {
        Some(d) => num(2.0 * d as f64 / (d as f64 + 1.0)),
        None => "2d/(d+1)".into(),
    };
    format!("div v, curl v ∈ C([0,T]; L^{q}) (helicity pairing defined): no discrete analog")
}

fn incompressible(s: &RegularitySummary) -> Vec<ClauseVerdict> {
    let t = TheoremId::IncompressibleHelicity;
    let assumed = || vec![pairing_assumption(s.dim)];
    let mut out = Vec::new();

    for (clause, v_sum, w_sum) in [
        (1u8, Summability::CN, Summability::Infinity),
        (2, Summability::Infinity, Summability::CN),
    ] {
        let mut c = Check::default();
        match (s.velocity_besov.as_ref(), s.vorticity_besov.as_ref()) {
            (Some(v), Some(w)) => {
                c.le(
                    "2/k + 1/ℓ",
                    2.0 * inv(v.time_integrability) + inv(w.time_integrability),
                    1.0,
                );
                c.le(
                    "2/p + 1/q",
                    2.0 * inv(v.integrability) + inv(w.integrability),
                    1.0,
                );
                let excess = 2.0 * v.exponent + w.exponent;
                c.ge(
                    &format!("2α + β = 2·{} + {}", num(v.exponent), num(w.exponent)),
                    excess,
                    1.0,
                );
                if excess - 1.0 <= CRITERIA_TOLERANCE {
                    let (name, m, need) = if clause == 1 {
                        ("v", v, v_sum)
                    } else {
                        ("ω", w, w_sum)
                    };
                    c.push(
                        m.summability == need,
                        format!(
                            "critical case needs {name} in c(ℕ), measured {}",
                            m.summability.symbol()
                        ),
                    );
                } else {
                    c.arithmetic
                        .push("2α + β > 1: c(ℕ) summability not needed".into());
                }
            }
            (v, w) => {
                if v.is_none() {
                    c.missing("no Besov measurement for v".into());
                }
                if w.is_none() {
                    c.missing("no Besov measurement for ω".into());
                }
            }
        }
        let statement = if clause == 1 {
            "v ∈ L^k Ḃ^α_{p,c(ℕ)}, ω ∈ L^ℓ Ḃ^β_{q,∞}, 2/k + 1/ℓ = 1, 2/p + 1/q = 1, 2α + β ≥ 1"
        } else {
            "v ∈ L^k Ḃ^α_{p,∞}, ω ∈ L^ℓ Ḃ^β_{q,c(ℕ)}, 2/k + 1/ℓ = 1, 2/p + 1/q = 1, 2α + β ≥ 1"
        };
        out.push(c.finish(t, clause, statement, assumed()));
    }

    let mut c = Check::default();
    match s.dim {
        Some(d) => {
            let q = 3.0 * d as f64 / (d as f64 + 2.0);
            c.besov(
                "ω",
                s.vorticity_besov.as_ref(),
                1.0 / 3.0,
                q,
                3.0,
                Summability::CN,
            );
        }
        None => c.missing("dimension not given".into()),
    }
    out.push(c.finish(t, 3, "ω ∈ L^3 Ḃ^{1/3}_{3d/(d+2),c(ℕ)}", assumed()));

    let mut c = Check::default();
    lebesgue_duality(&mut c, s);
    out.push(c.finish(
        t,
        4,
        "v ∈ L^{p/(p−2)} L^{q/(q−2)}, ω ∈ L^p L^q, 2 < p, q < ∞",
        assumed(),
    ));

    let mut c = Check::default();
    match (
        s.velocity_lebesgue.as_ref(),
        s.curl_vorticity_lebesgue.as_ref(),
    ) {
        (Some(v), Some(cw)) => {
            // 2r/(r−1) ≤ b with r ≤ a reads 1/a + 2/b ≤ 1.
            let st = inv(cw.time) + 2.0 * inv(v.time);
            c.le(
                &format!("time: 1/{} + 2/{}", num(cw.time), num(v.time)),
                st,
                1.0,
            );
            let ss = inv(cw.space) + 2.0 * inv(v.space);
            let line = format!(
                "space: 1/{} + 2/{} = {} ≤ 1",
                num(cw.space),
                num(v.space),
                num(ss)
            );
            let ok = if cw.space.is_infinite() {
                ss < 1.0 - CRITERIA_TOLERANCE
            } else {
                ss <= 1.0 + CRITERIA_TOLERANCE
            };
            c.push(ok, line);
        }
        (v, cw) => {
            if v.is_none() {
                c.missing("no Lebesgue measurement for v".into());
            }
            if cw.is_none() {
                c.missing("no Lebesgue measurement for curl ω".into());
            }
        }
    }
    out.push(c.finish(
        t,
        5,
        "v ∈ L^{2p/(p−1)} L^{2q/(q−1)}, curl ω ∈ L^p L^q, 1 ≤ p ≤ ∞, 1 ≤ q < ∞",
        assumed(),
    ));
    out
}

fn lebesgue_duality(c: &mut Check, s: &RegularitySummary) {
    match (s.velocity_lebesgue.as_ref(), s.vorticity_lebesgue.as_ref()) {
        (Some(v), Some(w)) => {
            c.push(
                w.time > 2.0 + CRITERIA_TOLERANCE,
                format!("time integrability of ω = {} > 2", num(w.time)),
            );
            c.push(
                w.space > 2.0 + CRITERIA_TOLERANCE,
                format!("spatial integrability of ω = {} > 2", num(w.space)),
            );
            dual_pair(c, "time", w.time, v.time, 2.0, 1.0);
            dual_pair(c, "space", w.space, v.space, 2.0, 1.0);
        }
        (v, w) => {
            if v.is_none() {
                c.missing("no Lebesgue measurement for v".into());
            }
            if w.is_none() {
                c.missing("no Lebesgue measurement for ω".into());
            }
        }
    }
}

fn corollary(s: &RegularitySummary) -> Vec<ClauseVerdict> {
    let t = TheoremId::IncompressibleCorollary;
    let assumed = || vec!["ω ∈ C([0,T]; L^{3/2}): no discrete analog".to_string()];
    let mut c = Check::default();
    c.dim3(s.dim);
    c.lebesgue("ω", s.vorticity_lebesgue.as_ref(), 3.0, 9.0 / 4.0);
    let first = c.finish(t, 1, "ω ∈ L^3 L^{9/4}, d = 3", assumed());
    let mut c = Check::default();
    c.dim3(s.dim);
    c.lebesgue("curl ω", s.curl_vorticity_lebesgue.as_ref(), 3.0, 9.0 / 7.0);
    vec![
        first,
        c.finish(t, 2, "curl ω ∈ L^3 L^{9/7}, d = 3", assumed()),
    ]
}

fn compressible_standing(c: &mut Check, s: &RegularitySummary) {
    match s.density_bounds {
        Some((c1, c2)) => {
            c.push(
                c1 > 0.0 && c1 <= c2,
                format!("0 < c₁ = {} ≤ ρ ≤ c₂ = {}", num(c1), num(c2)),
            );
        }
        None => c.missing("no density bounds".into()),
    }
    c.besov(
        "ρ",
        s.density_besov.as_ref(),
        1.0 / 3.0,
        3.0,
        3.0,
        Summability::CN,
    );
    // ρ ∈ L^∞ Ḃ^{1/3}_{∞,c(ℕ)} makes the momentum hypothesis redundant.
    let strong_density = s.density_besov.as_ref().is_some_and(|m| {
        m.time_integrability.is_infinite()
            && m.integrability.is_infinite()
            && (m.exponent > 1.0 / 3.0 + CRITERIA_TOLERANCE
                || (m.exponent >= 1.0 / 3.0 - CRITERIA_TOLERANCE
                    && m.summability == Summability::CN))
    });
    if strong_density {
        c.arithmetic
            .push("ρ ∈ L^∞ Ḃ^{1/3}_{∞,c(ℕ)}: momentum hypothesis not needed".into());
    } else {
        c.besov(
            "ρv",
            s.momentum_besov.as_ref(),
            1.0 / 3.0,
            3.0,
            3.0,
            Summability::Infinity,
        );
    }
    c.besov(
        "v",
        s.velocity_besov.as_ref(),
        1.0 / 3.0,
        3.0,
        3.0,
        Summability::CN,
    );
}

fn compressible(s: &RegularitySummary) -> Vec<ClauseVerdict> {
    let t = TheoremId::CompressibleHelicity;
    let assumed = || {
        vec![
            pairing_assumption(s.dim),
            "π ∈ C²[c₁, c₂]: holds for π = κρ^γ once c₁ > 0".to_string(),
        ]
    };
    let clauses: [(u8, &str, &dyn Fn(&mut Check)); 4] = [
        (1, "ω ∈ L^3 Ḃ^{1/3}_{3,∞}", &|c: &mut Check| {
            c.besov(
                "ω",
                s.vorticity_besov.as_ref(),
                1.0 / 3.0,
                3.0,
                3.0,
                Summability::Infinity,
            )
        }),
        (2, "ω ∈ L^3 L^3", &|c: &mut Check| {
            c.lebesgue("ω", s.vorticity_lebesgue.as_ref(), 3.0, 3.0)
        }),
        (
            3,
            "v ∈ L^{p/(p−2)} L^{q/(q−2)}, ω ∈ L^p L^q, 2 < p, q < ∞",
            &|c: &mut Check| lebesgue_duality(c, s),
        ),
        (4, "div v, ω ∈ L^3 L^{9/4}, d = 3", &|c: &mut Check| {
            c.dim3(s.dim);
            c.lebesgue("div v", s.divergence_lebesgue.as_ref(), 3.0, 9.0 / 4.0);
            c.lebesgue("ω", s.vorticity_lebesgue.as_ref(), 3.0, 9.0 / 4.0);
        }),
    ];
    clauses
        .iter()
        .map(|(k, statement, f)| {
            let mut c = Check::default();
            compressible_standing(&mut c, s);
            f(&mut c);
            c.finish(
                t,
                *k,
                &format!("standing bounds on ρ, ρv, v; {statement}"),
                assumed(),
            )
        })
        .collect()
}

fn sqg(s: &RegularitySummary) -> Vec<ClauseVerdict> {
    let mut c = Check::default();
    c.besov(
        "∇θ",
        s.grad_theta_besov.as_ref(),
        1.0 / 3.0,
        1.5,
        3.0,
        Summability::CN,
    );
    c.lebesgue(
        "∇θ",
        s.grad_theta_lebesgue.as_ref(),
        f64::INFINITY,
        4.0 / 3.0,
    );
    vec![c.finish(
        TheoremId::SqgHelicity,
        1,
        "∇θ ∈ L^3 Ḃ^{1/3}_{3/2,c(ℕ)} ∩ C([0,T]; L^{4/3})",
        vec!["continuity in time of ∇θ in L^{4/3}: measured as L^∞ in time".into()],
    )]
}

/// Every clause of every theorem, evaluated on `summary`.
pub fn criteria_evaluator(summary: &RegularitySummary) -> Vec<ClauseVerdict> {
    let mut out = compressible(summary);
    out.extend(incompressible(summary));
    out.extend(corollary(summary));
    out.extend(sqg(summary));
    out
}
