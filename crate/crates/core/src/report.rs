//! End-to-end runs producing a serializable report.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::sync::Arc;

use serde::Serialize;

use crate::chow::chow_ranks;
use crate::corpus;
use crate::duality::{build_bundle, hat_identity_holds, vanishing_holds};
use crate::error::{Error, Result};
use crate::fan::{face_fan, normal_fan, regularity_depth, Fan};
use crate::hodge::{
    collapse_and_betti, cosheaf_e, h_vector, h_vector_check, hodge_table, real_cell_complex, rightmost_column,
    HodgeTable,
};
use crate::io::parse_polytope;
use crate::koszul::cosheaf_koszul_check;
use crate::polytope::LatticePolytope;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FanChoice {
    #[default]
    Normal,
    Face,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Analysis {
    Hodge,
    Betti,
    Chow,
    Duality,
    Regularity,
    Maximality,
}

impl Analysis {
    pub const ALL: [Analysis; 6] = [
        Analysis::Hodge,
        Analysis::Betti,
        Analysis::Chow,
        Analysis::Duality,
        Analysis::Regularity,
        Analysis::Maximality,
    ];
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Table,
    Json,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Input {
    Corpus(String),
    /// Polytope text with a display name.
    Text { name: String, text: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub input: Input,
    pub fan: FanChoice,
    /// Empty means everything; duality is then skipped for non-reflexive
    /// input instead of failing.
    pub analyses: BTreeSet<Analysis>,
    pub format: Format,
}

impl RunConfig {
    pub fn corpus(name: &str) -> Self {
        RunConfig { input: Input::Corpus(name.into()), fan: FanChoice::Normal, analyses: BTreeSet::new(), format: Format::Json }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HodgeReport {
    pub input: String,
    pub fan: FanChoice,
    pub dim: usize,
    pub f_vector: Vec<usize>,
    pub reflexive: bool,
    pub regularity_depth: Option<usize>,
    pub hodge_table: Option<HodgeTable>,
    pub betti_real: Option<Vec<usize>>,
    pub betti_complex: Option<Vec<usize>>,
    pub collapsed: Option<bool>,
    pub maximal: Option<bool>,
    pub s_rank: Option<usize>,
    pub chow_ranks: Option<Vec<usize>>,
    pub h_vector: Vec<i64>,
    pub checks: BTreeMap<String, bool>,
}

pub fn load(input: &Input) -> Result<(String, LatticePolytope)> {
    match input {
        Input::Corpus(name) => Ok((name.clone(), corpus::get(name)?)),
        Input::Text { name, text } => Ok((name.clone(), parse_polytope(text)?)),
    }
}

pub fn run(config: &RunConfig) -> Result<HodgeReport> {
    let (name, delta) = load(&config.input)?;
    analyse(name, &delta, config.fan, &config.analyses)
}

pub fn analyse(name: String, delta: &LatticePolytope, choice: FanChoice, analyses: &BTreeSet<Analysis>) -> Result<HodgeReport> {
    let everything = analyses.is_empty();
    let wants = |a: Analysis| everything || analyses.contains(&a);
    let reflexive = delta.is_reflexive();
    let interior = delta.origin_interior();

    let (fan, other): (Arc<Fan>, Option<Fan>) = match choice {
        FanChoice::Normal => (Arc::new(normal_fan(delta)?), if interior { Some(face_fan(delta)?) } else { None }),
        FanChoice::Face => (Arc::new(face_fan(delta)?), Some(normal_fan(delta)?)),
    };
    let d = fan.dim();
    let f_vector: Vec<usize> = (0..d).map(|k| fan.cones_of_dim(d - k).len()).collect();
    let mut checks = BTreeMap::new();
    checks.insert("diamonds".to_string(), fan.check_diamonds().is_ok());

    let regularity_depth = other.as_ref().map(regularity_depth);
    let needs_table = [Analysis::Hodge, Analysis::Betti, Analysis::Chow, Analysis::Maximality].into_iter().any(wants);
    let table = if needs_table {
        checks.insert("functoriality".into(), cosheaf_e(&fan)?.verify_functoriality().is_ok());
        Some(hodge_table(&fan)?)
    } else {
        None
    };

    let mut s_rank = None;
    if wants(Analysis::Hodge) || wants(Analysis::Regularity) {
        let (s, predicted) = rightmost_column(&fan);
        s_rank = Some(s);
        if let Some(t) = &table {
            checks.insert("rightmost_column".into(), (0..=d).all(|q| t.get(d, q) == predicted[q]));
        }
    }
    if let Some(t) = &table {
        checks.insert("h_vector".into(), h_vector_check(&f_vector, t));
        if let Some(e) = regularity_depth {
            checks.insert("vanishing".into(), vanishing_holds(t, e));
        }
    }

    let (mut betti_real, mut betti_complex, mut collapsed, mut maximal) = (None, None, None, None);
    if wants(Analysis::Betti) || wants(Analysis::Maximality) {
        let t = table.as_ref().expect("table computed for betti");
        let real = real_cell_complex(&fan)?.homology_ranks();
        let c = collapse_and_betti(t, &real)?;
        checks.insert("column_sums_bound_betti".into(), true);
        if let Some(s) = s_rank {
            checks.insert("top_betti".into(), real[d] == 1 << (d - s));
        }
        betti_real = Some(real);
        collapsed = Some(c.collapsed);
        betti_complex = c.betti_complex;
        maximal = c.maximal;
    }

    let chow = if wants(Analysis::Chow) {
        let c = chow_ranks(&fan)?;
        if let Some(t) = &table {
            checks.insert("chow_equals_diagonal".into(), c == t.diagonal());
        }
        Some(c)
    } else {
        None
    };

    if wants(Analysis::Duality) {
        if reflexive {
            let base = match choice {
                FanChoice::Normal => delta.clone(),
                FanChoice::Face => delta.polar()?,
            };
            checks.insert("polar_involution".into(), base.polar()?.polar()?.vertices() == base.vertices());
            let bundle = build_bundle(&base)?;
            checks.insert("duality_stalk_dims".into(), bundle.verify_stalk_dims());
            checks.insert("duality_c_identity".into(), bundle.verify_c_identity());
            checks.insert("duality_exact_sequences".into(), bundle.verify_ses());
            checks.insert("duality_euler_additivity".into(), bundle.verify_euler_additivity()?);
            let g = bundle.g_vanishing(d)?;
            checks.insert("duality_g_vanishing".into(), bundle.verify_g_vanishing(&g));
            let mut hat = true;
            for k in 0..=d {
                hat &= hat_identity_holds(&bundle, k)?;
            }
            checks.insert("duality_hat_identity".into(), hat);
            let mut koszul = true;
            for q in 1..=d {
                koszul &= cosheaf_koszul_check(&bundle, q)?;
            }
            checks.insert("koszul_cosheaf_sequences".into(), koszul);
        } else if !everything {
            return Err(Error::NotReflexive);
        }
    }

    Ok(HodgeReport {
        input: name,
        fan: choice,
        dim: d,
        h_vector: h_vector(&f_vector),
        f_vector,
        reflexive,
        regularity_depth,
        hodge_table: table,
        betti_real,
        betti_complex,
        collapsed,
        maximal,
        s_rank,
        chow_ranks: chow,
        checks,
    })
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Rows `q = d, ..., 0` from the top, row `q` starting at column `p = q`.
pub fn format_table(t: &HodgeTable) -> String {
    let d = t.d();
    let width = t.rows().iter().flatten().map(|x| x.to_string().len()).max().unwrap_or(1).max(d.to_string().len()) + 1;
    let mut out = String::new();
    for q in (0..=d).rev() {
        let _ = write!(out, "{q:>3} |");
        for p in 0..=d {
            if p < q {
                let _ = write!(out, "{:>width$}", "");
            } else {
                let _ = write!(out, "{:>width$}", t.get(p, q));
            }
        }
        out.truncate(out.trim_end().len());
        out.push('\n');
    }
    let _ = write!(out, "    +{}\n  p  ", "-".repeat(width * (d + 1)));
    for p in 0..=d {
        let _ = write!(out, "{p:>width$}");
    }
    out.push('\n');
    out
}

impl HodgeReport {
    pub fn checks_pass(&self) -> bool {
        self.checks.values().all(|&b| b)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let fan = match self.fan {
            FanChoice::Normal => "normal",
            FanChoice::Face => "face",
        };
        let _ = writeln!(s, "input: {} ({fan} fan, dimension {})", self.input, self.dim);
        let _ = writeln!(s, "f-vector: {}", join(&self.f_vector));
        let _ = writeln!(s, "h-vector: {}", join(&self.h_vector));
        let _ = writeln!(s, "reflexive: {}", yes_no(self.reflexive));
        if let Some(e) = self.regularity_depth {
            let _ = writeln!(s, "regularity depth of the dual fan: {e}");
        }
        if let Some(r) = self.s_rank {
            let _ = writeln!(s, "ray rank mod 2: {r}");
        }
        if let Some(t) = &self.hodge_table {
            let _ = writeln!(s, "Hodge table (row q, column p):");
            s.push_str(&format_table(t));
        }
        if let Some(b) = &self.betti_real {
            let _ = writeln!(s, "real Betti: {}", join(b));
        }
        if let Some(c) = self.collapsed {
            let _ = writeln!(s, "collapsed: {}", yes_no(c));
        }
        if let Some(b) = &self.betti_complex {
            let _ = writeln!(s, "complex Betti: {}", join(b));
        }
        if let Some(m) = self.maximal {
            let _ = writeln!(s, "maximal: {}", yes_no(m));
        }
        if let Some(c) = &self.chow_ranks {
            let _ = writeln!(s, "Chow ranks: {}", join(c));
        }
        if !self.checks.is_empty() {
            let _ = writeln!(s, "checks:");
            for (name, ok) in &self.checks {
                let _ = writeln!(s, "  {name}: {}", if *ok { "ok" } else { "FAILED" });
            }
        }
        s
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.to_json() + "\n",
            Format::Table => self.to_text(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_report() {
        let r = run(&RunConfig::corpus("square")).unwrap();
        assert_eq!(r.f_vector, vec![4, 4]);
        assert_eq!(r.hodge_table.as_ref().unwrap().diagonal(), vec![1, 2, 1]);
        assert_eq!(r.betti_real, Some(vec![1, 2, 1]));
        assert_eq!(r.betti_complex, Some(vec![1, 0, 2, 0, 1]));
        assert_eq!(r.maximal, Some(true));
        assert_eq!(r.chow_ranks, Some(vec![1, 2, 1]));
        assert!(r.checks_pass(), "{:?}", r.checks);
    }

    #[test]
    fn face_fan_of_square_is_the_cross_normal_fan() {
        let mut c = RunConfig::corpus("square");
        c.fan = FanChoice::Face;
        let face = run(&c).unwrap();
        let cross = run(&RunConfig::corpus("cross2")).unwrap();
        assert_eq!(face.hodge_table, cross.hodge_table);
        assert_eq!(face.f_vector, cross.f_vector);
        assert!(face.checks_pass());
    }

    #[test]
    fn duality_requires_reflexive_when_asked() {
        let text = "2 3\n0 0\n2 0\n0 2\n".to_string();
        let mut c = RunConfig { input: Input::Text { name: "t".into(), text }, ..RunConfig::corpus("") };
        c.analyses = BTreeSet::from([Analysis::Duality]);
        assert_eq!(run(&c).unwrap_err(), Error::NotReflexive);
        c.analyses.clear();
        let r = run(&c).unwrap();
        assert!(!r.reflexive);
        assert_eq!(r.regularity_depth, None);
    }

    #[test]
    fn table_layout() {
        let t = HodgeTable::from_ranks(vec![vec![1], vec![0, 2], vec![0, 0, 1]]);
        let s = format_table(&t);
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], "  2 |     1");
        assert_eq!(lines[1], "  1 |   2 0");
        assert_eq!(lines[2], "  0 | 1 0 0");
        assert!(lines[4].ends_with("0 1 2"));
    }
}
