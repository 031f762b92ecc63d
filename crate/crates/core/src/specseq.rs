//! Assembly of the first page of the direct-image spectral sequence,
//! concentration classification, graded-level cancellation flags, and the
//! two-sided duality check.

use crate::bbw::{direct_image, DirectImage};
use crate::bundles::ParabolicMarking;
use crate::error::Result;
use crate::relgeom::FibrationSpec;
use crate::roots::Weight;
use std::fmt;

/// Which complex the page was assembled from.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PageKind {
    DeRham,
    Bgg,
}

impl fmt::Display for PageKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PageKind::DeRham => write!(f, "de-rham"),
            PageKind::Bgg => write!(f, "bgg"),
        }
    }
}

/// One direct-image summand in a page cell.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct E1Entry {
    pub label: Weight,
    /// Filtration degree of the composition factor it came from.
    pub source_degree: usize,
    /// Set when the entry is a candidate absorption partner.
    pub flagged: bool,
}

/// The first page: a dense `(p, q)` grid of label multisets on the
/// cycle-space marking. Empty cells are represented explicitly so that
/// strictness is decidable from the page alone.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct E1Page {
    kind: PageKind,
    marking: ParabolicMarking,
    d: usize,
    s: usize,
    cells: Vec<Vec<Vec<E1Entry>>>,
}

impl E1Page {
    pub(crate) fn new(kind: PageKind, marking: ParabolicMarking, d: usize, s: usize) -> E1Page {
        E1Page {
            kind,
            marking,
            d,
            s,
            cells: vec![vec![Vec::new(); s + 1]; d + 1],
        }
    }

    pub fn kind(&self) -> PageKind {
        self.kind
    }

    pub fn marking(&self) -> &ParabolicMarking {
        &self.marking
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn cell(&self, p: usize, q: usize) -> &[E1Entry] {
        &self.cells[p][q]
    }

    pub fn cell_labels(&self, p: usize, q: usize) -> Vec<Weight> {
        let mut out: Vec<Weight> = self.cells[p][q].iter().map(|e| e.label.clone()).collect();
        out.sort();
        out
    }

    pub fn is_cell_empty(&self, p: usize, q: usize) -> bool {
        self.cells[p][q].is_empty()
    }

    pub fn nonempty_cells(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for p in 0..=self.d {
            for q in 0..=self.s {
                if !self.cells[p][q].is_empty() {
                    out.push((p, q));
                }
            }
        }
        out
    }

    /// Number of flagged absorption pairs.
    pub fn flag_pairs(&self) -> usize {
        let flagged: usize = self
            .cells
            .iter()
            .flatten()
            .flatten()
            .filter(|e| e.flagged)
            .count();
        flagged / 2
    }

    /// The page with every flagged entry removed.
    pub fn discounted(&self) -> E1Page {
        let mut out = self.clone();
        for column in &mut out.cells {
            for cell in column {
                cell.retain(|e| !e.flagged);
            }
        }
        out
    }

    pub(crate) fn push(&mut self, p: usize, q: usize, label: Weight, source_degree: usize) {
        self.cells[p][q].push(E1Entry {
            label,
            source_degree,
            flagged: false,
        });
    }

    pub(crate) fn sort_cells(&mut self) {
        for column in &mut self.cells {
            for cell in column {
                cell.sort();
            }
        }
    }
}

/// Assemble the de Rham based first page: push every composition factor of
/// the coupled relative forms through the direct image along the compact
/// leg, then mark candidate absorptions.
pub fn assemble_e1(fib: &FibrationSpec, label: &Weight) -> Result<E1Page> {
    let mut page = E1Page::new(PageKind::DeRham, fib.m_marking().clone(), fib.d(), fib.s());
    for p in 0..=fib.d() {
        let coupled = fib.coupled_forms(label, p)?;
        for factor in coupled.factors() {
            match direct_image(fib.x_marking(), fib.m_marking(), &factor.weight)? {
                DirectImage::Vanishes => {}
                DirectImage::Image { degree, label } => {
                    page.push(p, degree, label, factor.degree);
                }
            }
        }
    }
    page.sort_cells();
    detect_cancellations(&mut page);
    Ok(page)
}

/// Flag pairs of identical labels in cells `(p, q)` and `(p, q-1)` arising
/// from factors adjacent in the filtration of the same coupled form. Each
/// entry matches at most one partner; matching is greedy over the sorted
/// cells, so the outcome is deterministic.
pub fn detect_cancellations(page: &mut E1Page) {
    for p in 0..=page.d {
        for q in (1..=page.s).rev() {
            let (lower_cols, upper_cols) = page.cells[p].split_at_mut(q);
            let lower = &mut lower_cols[q - 1];
            let upper = &mut upper_cols[0];
            for entry in upper.iter_mut() {
                if entry.flagged {
                    continue;
                }
                let partner = lower.iter_mut().find(|candidate| {
                    !candidate.flagged
                        && candidate.label == entry.label
                        && candidate.source_degree.abs_diff(entry.source_degree) == 1
                });
                if let Some(partner) = partner {
                    partner.flagged = true;
                    entry.flagged = true;
                }
            }
        }
    }
}

/// Concentration classes of a first page, in the order strict-zero, zero,
/// none, top, strict-top.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ConcentrationClass {
    StrictDegreeZero,
    DegreeZero,
    NoConcentration,
    TopDegree,
    StrictTopDegree,
}

impl ConcentrationClass {
    pub fn is_degree_zero(&self) -> bool {
        matches!(
            self,
            ConcentrationClass::StrictDegreeZero | ConcentrationClass::DegreeZero
        )
    }

    pub fn is_top_degree(&self) -> bool {
        matches!(
            self,
            ConcentrationClass::StrictTopDegree | ConcentrationClass::TopDegree
        )
    }
}

impl fmt::Display for ConcentrationClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            ConcentrationClass::StrictDegreeZero => "strict-degree-zero",
            ConcentrationClass::DegreeZero => "degree-zero",
            ConcentrationClass::NoConcentration => "none",
            ConcentrationClass::TopDegree => "top-degree",
            ConcentrationClass::StrictTopDegree => "strict-top-degree",
        };
        write!(f, "{name}")
    }
}

/// A classification with its witnesses: the cells violating concentration,
/// or the columns that fail strictness.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Classification {
    pub class: ConcentrationClass,
    pub violating_cells: Vec<(usize, usize)>,
    pub empty_columns: Vec<usize>,
}

/// Classify a page per the concentration definitions. A page with no
/// non-vanishing cell at all carries no information and is reported as no
/// concentration.
pub fn classify(page: &E1Page) -> Classification {
    let nonempty = page.nonempty_cells();
    if nonempty.is_empty() {
        return Classification {
            class: ConcentrationClass::NoConcentration,
            violating_cells: Vec::new(),
            empty_columns: (0..=page.d()).collect(),
        };
    }
    let above: Vec<(usize, usize)> = nonempty.iter().copied().filter(|&(_, q)| q > 0).collect();
    let below: Vec<(usize, usize)> = nonempty
        .iter()
        .copied()
        .filter(|&(_, q)| q < page.s())
        .collect();
    if above.is_empty() {
        let empty_columns: Vec<usize> = (0..=page.d())
            .filter(|&p| page.is_cell_empty(p, 0))
            .collect();
        let class = if empty_columns.is_empty() {
            ConcentrationClass::StrictDegreeZero
        } else {
            ConcentrationClass::DegreeZero
        };
        return Classification {
            class,
            violating_cells: Vec::new(),
            empty_columns,
        };
    }
    if below.is_empty() {
        let empty_columns: Vec<usize> = (0..=page.d())
            .filter(|&p| page.is_cell_empty(p, page.s()))
            .collect();
        let class = if empty_columns.is_empty() {
            ConcentrationClass::StrictTopDegree
        } else {
            ConcentrationClass::TopDegree
        };
        return Classification {
            class,
            violating_cells: Vec::new(),
            empty_columns,
        };
    }
    let mut violating = above;
    violating.extend(below);
    violating.sort_unstable();
    violating.dedup();
    Classification {
        class: ConcentrationClass::NoConcentration,
        violating_cells: violating,
        empty_columns: Vec::new(),
    }
}

/// Per-cell outcome of a duality comparison.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DualityCell {
    pub p: usize,
    pub q: usize,
    pub left: Vec<Weight>,
    pub right: Vec<Weight>,
    pub equal: bool,
}

/// Full duality report over the `(p, q)` grid.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DualityReport {
    pub cells: Vec<DualityCell>,
    pub pass: bool,
}

/// Verify the duality isomorphism cell by cell: the page of
/// `kappa_D (x) E*` against the cycle-canonical twist of the dual of the
/// `(d-p, s-q)`-reflected page of `E`. The two sides are computed along
/// independent paths; a failed comparison is a report outcome, not an error.
pub fn check_duality(fib: &FibrationSpec, label: &Weight) -> Result<DualityReport> {
    let left_page = assemble_e1(fib, &fib.serre_twist(label)?)?;
    let right_page = assemble_e1(fib, label)?;
    compare_dual_pages(fib, &left_page, &right_page)
}

pub(crate) fn compare_dual_pages(
    fib: &FibrationSpec,
    left_page: &E1Page,
    right_page: &E1Page,
) -> Result<DualityReport> {
    let kappa_m = fib.cycle_canonical();
    let m = fib.m_marking();
    let d = left_page.d();
    let s = left_page.s();
    let mut cells = Vec::new();
    let mut pass = true;
    for p in 0..=d {
        for q in 0..=s {
            let left = left_page.cell_labels(p, q);
            let mut right: Vec<Weight> = right_page
                .cell_labels(d - p, s - q)
                .iter()
                .map(|l| Ok(kappa_m.add(&m.dual_label(l)?)))
                .collect::<Result<_>>()?;
            right.sort();
            let equal = left == right;
            pass &= equal;
            cells.push(DualityCell {
                p,
                q,
                left,
                right,
                equal,
            });
        }
    }
    Ok(DualityReport { cells, pass })
}

/// Closed-form concentration prediction in the Hermitian-holomorphic case.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ConcentrationPrediction {
    DegreeZero,
    TopDegree,
    Unknown,
}

impl fmt::Display for ConcentrationPrediction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            ConcentrationPrediction::DegreeZero => "degree-zero",
            ConcentrationPrediction::TopDegree => "top-degree",
            ConcentrationPrediction::Unknown => "unknown",
        };
        write!(f, "{name}")
    }
}

/// Predict the concentration class from highest-weight dominance: degree
/// zero when the highest weight of `E` is dominant for the whole group, top
/// degree when that of `kappa_D (x) E*` is.
pub fn hermitian_criterion(fib: &FibrationSpec, label: &Weight) -> Result<ConcentrationPrediction> {
    if !fib.hermitian_holomorphic() {
        return Err(crate::error::Error::NotHermitianHolomorphic);
    }
    fib.q_marking().validate_label(label)?;
    let cartan = fib.cartan();
    if cartan.is_dominant(label) {
        return Ok(ConcentrationPrediction::DegreeZero);
    }
    if cartan.is_dominant(&fib.serre_twist(label)?) {
        return Ok(ConcentrationPrediction::TopDegree);
    }
    Ok(ConcentrationPrediction::Unknown)
}
