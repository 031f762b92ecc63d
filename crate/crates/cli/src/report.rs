//! Machine-readable report types and their renderings.
//!
//! Every report serializes to JSON with a fixed field order and parses back
//! bit-exactly; the text rendering draws `(p, q)` grids with q increasing
//! upwards and p increasing to the right.

use flagcalc::{
    classify, BggComplex, DirectImage, DualityReport, E1Page, FibrationSpec, ParabolicMarking,
    Weight, WeylWord,
};
use serde::{Deserialize, Serialize};

#[derive(Serialize, Deserialize, PartialEq, Eq, Clone, Debug)]
pub struct FibrationInfo {
    pub name: String,
    pub cartan: String,
    pub q_marking: String,
    pub m_marking: String,
    pub transport: Vec<usize>,
    pub cycle_stabilizer: String,
    pub hermitian_holomorphic: bool,
    pub d: usize,
    pub s: usize,
}

impl FibrationInfo {
    pub fn new(fib: &FibrationSpec) -> FibrationInfo {
        FibrationInfo {
            name: fib.name().to_string(),
            cartan: fib.cartan().name().to_string(),
            q_marking: fib.q_marking().mask(),
            m_marking: fib.m_marking().mask(),
            transport: fib
                .transport()
                .map(|w| w.0.iter().map(|i| i + 1).collect())
                .unwrap_or_default(),
            cycle_stabilizer: match fib.stabilizer() {
                flagcalc::CycleStabilizer::Parabolic => "parabolic".to_string(),
                flagcalc::CycleStabilizer::Levi => "levi".to_string(),
            },
            hermitian_holomorphic: fib.hermitian_holomorphic(),
            d: fib.d(),
            s: fib.s(),
        }
    }
}

#[derive(Serialize, Deserialize, PartialEq, Eq, Clone, Debug)]
pub struct EntryReport {
    pub label: Vec<i64>,
    pub degree: usize,
    pub flagged: bool,
}

#[derive(Serialize, Deserialize, PartialEq, Eq, Clone, Debug)]
pub struct CellReport {
    pub p: usize,
    pub q: usize,
    pub entries: Vec<EntryReport>,
}

#[derive(Serialize, Deserialize, PartialEq, Eq, Clone, Debug)]
pub struct KernelPresentation {
    pub degree: usize,
    pub source: Vec<Vec<i64>>,
    pub target: Vec<Vec<i64>>,
}

#[derive(Serialize, Deserialize, PartialEq, Eq, Clone, Debug)]
pub struct PageReport {
    pub fibration: FibrationInfo,
    pub bundle: Vec<i64>,
    pub kind: String,
    pub discounted: bool,
    pub d: usize,
    pub s: usize,
    pub cell_marking: String,
    pub cells: Vec<CellReport>,
    pub classification: String,
    pub flag_pairs: usize,
    pub kernel_presentation: Option<KernelPresentation>,
}

impl PageReport {
    pub fn new(fib: &FibrationSpec, bundle: &Weight, page: &E1Page, discounted: bool) -> Self {
        let mut cells = Vec::new();
        for p in 0..=page.d() {
            for q in 0..=page.s() {
                let entries: Vec<EntryReport> = page
                    .cell(p, q)
                    .iter()
                    .map(|e| EntryReport {
                        label: e.label.coords().to_vec(),
                        degree: e.source_degree,
                        flagged: e.flagged,
                    })
                    .collect();
                if !entries.is_empty() {
                    cells.push(CellReport { p, q, entries });
                }
            }
        }
        let classification = classify(page);
        // When the page concentrates in top degree, the transform is the
        // kernel of the first map of the top row.
        let kernel_presentation = if classification.class.is_top_degree() && page.d() >= 1 {
            Some(KernelPresentation {
                degree: page.s(),
                source: page
                    .cell_labels(0, page.s())
                    .iter()
                    .map(|w| w.coords().to_vec())
                    .collect(),
                target: page
                    .cell_labels(1, page.s())
                    .iter()
                    .map(|w| w.coords().to_vec())
                    .collect(),
            })
        } else {
            None
        };
        PageReport {
            fibration: FibrationInfo::new(fib),
            bundle: bundle.coords().to_vec(),
            kind: page.kind().to_string(),
            discounted,
            d: page.d(),
            s: page.s(),
            cell_marking: page.marking().mask(),
            cells,
            classification: classification.class.to_string(),
            flag_pairs: page.flag_pairs(),
            kernel_presentation,
        }
    }

    fn cell_text(&self, p: usize, q: usize) -> String {
        let found = self.cells.iter().find(|c| c.p == p && c.q == q);
        match found {
            None => ".".to_string(),
            Some(cell) => {
                let parts: Vec<String> = cell
                    .entries
                    .iter()
                    .map(|e| {
                        let coords: Vec<String> = e.label.iter().map(|c| c.to_string()).collect();
                        let star = if e.flagged { "*" } else { "" };
                        format!("({}){star}", coords.join(","))
                    })
                    .collect();
                parts.join(" ")
            }
        }
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let coords: Vec<String> = self.bundle.iter().map(|c| c.to_string()).collect();
        out.push_str(&format!(
            "E1 page ({}) of {}[{}]{{{}}} on {}; cells on {}[{}]; d={} s={}{}\n",
            self.kind,
            self.fibration.cartan,
            self.fibration.q_marking,
            coords.join(","),
            self.fibration.name,
            self.fibration.cartan,
            self.cell_marking,
            self.d,
            self.s,
            if self.discounted { "; discounted" } else { "" },
        ));
        let mut widths = vec![0usize; self.d + 1];
        let mut texts = vec![vec![String::new(); self.s + 1]; self.d + 1];
        for (p, column) in texts.iter_mut().enumerate() {
            for (q, slot) in column.iter_mut().enumerate() {
                *slot = self.cell_text(p, q);
            }
            widths[p] = column
                .iter()
                .map(String::len)
                .max()
                .unwrap_or(1)
                .max(format!("p={p}").len());
        }
        for q in (0..=self.s).rev() {
            out.push_str(&format!("q={q} |"));
            for p in 0..=self.d {
                out.push_str(&format!(" {:<width$} |", texts[p][q], width = widths[p]));
            }
            out.push('\n');
        }
        out.push_str("     ");
        for (p, width) in widths.iter().enumerate() {
            out.push_str(&format!(" {:<width$}  ", format!("p={p}"), width = width));
        }
        out.push('\n');
        out.push_str(&format!("classification: {}\n", self.classification));
        out.push_str(&format!("flagged absorption pairs: {}\n", self.flag_pairs));
        if let Some(kp) = &self.kernel_presentation {
            let fmt = |labels: &[Vec<i64>]| {
                let parts: Vec<String> = labels
                    .iter()
                    .map(|l| {
                        let coords: Vec<String> = l.iter().map(|c| c.to_string()).collect();
                        format!("({})", coords.join(","))
                    })
                    .collect();
                if parts.is_empty() {
                    "0".to_string()
                } else {
                    parts.join(" ")
                }
            };
            out.push_str(&format!(
                "kernel presentation in degree {}: {} -> {}\n",
                kp.degree,
                fmt(&kp.source),
                fmt(&kp.target)
            ));
        }
        out
    }
}

#[derive(Serialize, Deserialize, PartialEq, Eq, Clone, Debug)]
pub struct DualityCellReport {
    pub p: usize,
    pub q: usize,
    pub left: Vec<Vec<i64>>,
    pub right: Vec<Vec<i64>>,
    pub equal: bool,
}

#[derive(Serialize, Deserialize, PartialEq, Eq, Clone, Debug)]
pub struct DualityReportOut {
    pub fibration: FibrationInfo,
    pub bundle: Vec<i64>,
    pub kind: String,
    pub pass: bool,
    pub cells: Vec<DualityCellReport>,
}

impl DualityReportOut {
    pub fn new(fib: &FibrationSpec, bundle: &Weight, kind: &str, report: &DualityReport) -> Self {
        DualityReportOut {
            fibration: FibrationInfo::new(fib),
            bundle: bundle.coords().to_vec(),
            kind: kind.to_string(),
            pass: report.pass,
            cells: report
                .cells
                .iter()
                .map(|c| DualityCellReport {
                    p: c.p,
                    q: c.q,
                    left: c.left.iter().map(|w| w.coords().to_vec()).collect(),
                    right: c.right.iter().map(|w| w.coords().to_vec()).collect(),
                    equal: c.equal,
                })
                .collect(),
        }
    }

    pub fn render_text(&self) -> String {
        let coords: Vec<String> = self.bundle.iter().map(|c| c.to_string()).collect();
        let mut out = format!(
            "duality check ({}) of {}[{}]{{{}}} on {}: {}\n",
            self.kind,
            self.fibration.cartan,
            self.fibration.q_marking,
            coords.join(","),
            self.fibration.name,
            if self.pass { "PASS" } else { "FAIL" }
        );
        for cell in &self.cells {
            let fmt = |labels: &[Vec<i64>]| -> String {
                if labels.is_empty() {
                    return ".".to_string();
                }
                let parts: Vec<String> = labels
                    .iter()
                    .map(|l| {
                        let cs: Vec<String> = l.iter().map(|c| c.to_string()).collect();
                        format!("({})", cs.join(","))
                    })
                    .collect();
                parts.join(" ")
            };
            out.push_str(&format!(
                "  ({},{}) {} | {} | {}\n",
                cell.p,
                cell.q,
                if cell.equal { "ok  " } else { "FAIL" },
                fmt(&cell.left),
                fmt(&cell.right)
            ));
        }
        out
    }
}

#[derive(Serialize, Deserialize, PartialEq, Eq, Clone, Debug)]
pub struct RandomDualityReport {
    pub fibration: FibrationInfo,
    pub kind: String,
    pub seed: u64,
    pub count: usize,
    pub failures: Vec<Vec<i64>>,
    pub pass: bool,
}

impl RandomDualityReport {
    pub fn render_text(&self) -> String {
        let mut out = format!(
            "duality check ({}) of {} seeded random labels on {} (seed {}): {}\n",
            self.kind,
            self.count,
            self.fibration.name,
            self.seed,
            if self.pass { "PASS" } else { "FAIL" }
        );
        for f in &self.failures {
            let cs: Vec<String> = f.iter().map(|c| c.to_string()).collect();
            out.push_str(&format!("  FAIL at ({})\n", cs.join(",")));
        }
        out
    }
}

#[derive(Serialize, Deserialize, PartialEq, Eq, Clone, Debug)]
pub struct BbwReport {
    pub cartan: String,
    pub total: String,
    pub base: String,
    pub label: Vec<i64>,
    pub vanishes: bool,
    pub degree: Option<usize>,
    pub image: Option<Vec<i64>>,
}

impl BbwReport {
    pub fn new(
        total: &ParabolicMarking,
        base: &ParabolicMarking,
        label: &Weight,
        image: &DirectImage,
    ) -> Self {
        BbwReport {
            cartan: total.cartan().name().to_string(),
            total: total.mask(),
            base: base.mask(),
            label: label.coords().to_vec(),
            vanishes: image.is_vanishing(),
            degree: image.degree(),
            image: image.label().map(|w| w.coords().to_vec()),
        }
    }

    pub fn render_text(&self) -> String {
        let cs: Vec<String> = self.label.iter().map(|c| c.to_string()).collect();
        let lhs = format!(
            "{}[{}]{{{}}} -> {}[{}]",
            self.cartan,
            self.total,
            cs.join(","),
            self.cartan,
            self.base
        );
        match (&self.degree, &self.image) {
            (Some(q), Some(img)) => {
                let ics: Vec<String> = img.iter().map(|c| c.to_string()).collect();
                format!("{lhs}: q={q} image ({})\n", ics.join(","))
            }
            _ => format!("{lhs}: vanishes\n"),
        }
    }
}

#[derive(Serialize, Deserialize, PartialEq, Eq, Clone, Debug)]
pub struct BggComplexReport {
    pub fibration: FibrationInfo,
    pub bundle: Vec<i64>,
    pub reps: Vec<Vec<usize>>,
    pub terms: Vec<Vec<Vec<i64>>>,
}

impl BggComplexReport {
    pub fn new(fib: &FibrationSpec, bundle: &Weight, complex: &BggComplex) -> Self {
        BggComplexReport {
            fibration: FibrationInfo::new(fib),
            bundle: bundle.coords().to_vec(),
            reps: complex
                .reps
                .iter()
                .map(|w: &WeylWord| w.0.iter().map(|i| i + 1).collect())
                .collect(),
            terms: complex
                .terms
                .iter()
                .map(|group| group.iter().map(|t| t.coords().to_vec()).collect())
                .collect(),
        }
    }

    pub fn render_text(&self) -> String {
        let coords: Vec<String> = self.bundle.iter().map(|c| c.to_string()).collect();
        let mut out = format!(
            "BGG complex of {}[{}]{{{}}} along the contractible leg of {}\n",
            self.fibration.cartan,
            self.fibration.q_marking,
            coords.join(","),
            self.fibration.name
        );
        let reps: Vec<String> = self
            .reps
            .iter()
            .map(|word| {
                if word.is_empty() {
                    "e".to_string()
                } else {
                    word.iter()
                        .map(|i| format!("s{i}"))
                        .collect::<Vec<_>>()
                        .join(".")
                }
            })
            .collect();
        out.push_str(&format!("coset representatives: {}\n", reps.join(", ")));
        let groups: Vec<String> = self
            .terms
            .iter()
            .map(|group| {
                if group.is_empty() {
                    return "0".to_string();
                }
                group
                    .iter()
                    .map(|t| {
                        let cs: Vec<String> = t.iter().map(|c| c.to_string()).collect();
                        format!("({})", cs.join(","))
                    })
                    .collect::<Vec<_>>()
                    .join(" (+) ")
            })
            .collect();
        out.push_str(&format!("terms: {}\n", groups.join(" -> ")));
        out
    }
}

#[derive(Serialize, Deserialize, PartialEq, Eq, Clone, Debug)]
pub struct SweepRow {
    pub label: Vec<i64>,
    pub predicted: String,
    pub computed: String,
    pub flag_pairs: usize,
    pub matched: bool,
}

#[derive(Serialize, Deserialize, PartialEq, Eq, Clone, Debug)]
pub struct SweepReport {
    pub fibration: FibrationInfo,
    pub criterion: String,
    pub advisory: bool,
    pub total: usize,
    pub mismatches: usize,
    pub rows: Vec<SweepRow>,
}

impl SweepReport {
    pub fn render_text(&self) -> String {
        let mut out = format!(
            "sweep on {}; criterion {}{}: {}/{} rows match\n",
            self.fibration.name,
            self.criterion,
            if self.advisory { " (advisory)" } else { "" },
            self.total - self.mismatches,
            self.total
        );
        let width = self
            .rows
            .iter()
            .map(|r| format_coords(&r.label).len())
            .max()
            .unwrap_or(5)
            .max(5);
        let pwidth = self
            .rows
            .iter()
            .map(|r| r.predicted.len())
            .max()
            .unwrap_or(9)
            .max(9);
        let cwidth = self
            .rows
            .iter()
            .map(|r| r.computed.len())
            .max()
            .unwrap_or(8)
            .max(8);
        out.push_str(&format!(
            "{:<width$}  {:<pwidth$}  {:<cwidth$}  flags  match\n",
            "label", "predicted", "computed"
        ));
        for row in &self.rows {
            out.push_str(&format!(
                "{:<width$}  {:<pwidth$}  {:<cwidth$}  {:<5}  {}\n",
                format_coords(&row.label),
                row.predicted,
                row.computed,
                row.flag_pairs,
                if row.matched { "ok" } else { "MISMATCH" }
            ));
        }
        out
    }
}

fn format_coords(coords: &[i64]) -> String {
    let cs: Vec<String> = coords.iter().map(|c| c.to_string()).collect();
    format!("({})", cs.join(","))
}

#[derive(Serialize, Deserialize, PartialEq, Eq, Clone, Debug)]
pub struct ScenarioBundleReport {
    pub bundle: Vec<i64>,
    pub de_rham: PageReport,
    pub discounted_classification: String,
    pub duality_pass: bool,
    pub bgg: Option<PageReport>,
    pub bgg_duality_pass: Option<bool>,
}

#[derive(Serialize, Deserialize, PartialEq, Eq, Clone, Debug)]
pub struct ScenarioReport {
    pub fibration: FibrationInfo,
    pub bundles: Vec<ScenarioBundleReport>,
    pub all_duality_pass: bool,
}

impl ScenarioReport {
    pub fn render_text(&self) -> String {
        let mut out = format!(
            "scenario {}: {} over {} | {} bundles | duality {}\n",
            self.fibration.name,
            self.fibration.q_marking,
            self.fibration.m_marking,
            self.bundles.len(),
            if self.all_duality_pass {
                "PASS"
            } else {
                "FAIL"
            }
        );
        for b in &self.bundles {
            out.push('\n');
            out.push_str(&b.de_rham.render_text());
            if b.de_rham.flag_pairs > 0 {
                out.push_str(&format!(
                    "discounted classification: {}\n",
                    b.discounted_classification
                ));
            }
            out.push_str(&format!(
                "duality: {}\n",
                if b.duality_pass { "PASS" } else { "FAIL" }
            ));
            if let Some(bgg) = &b.bgg {
                out.push_str(&bgg.render_text());
            }
            if let Some(pass) = b.bgg_duality_pass {
                out.push_str(&format!(
                    "bgg duality: {}\n",
                    if pass { "PASS" } else { "FAIL" }
                ));
            }
        }
        out
    }
}
