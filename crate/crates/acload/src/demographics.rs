//! Demographic groups and the household-size to group distribution.

use thiserror::Error;

use crate::float::{cast, Float};
use crate::geo::{size_bin_label, GridCell, SIZE_BINS};

/// Resident demographic groups, in the canonical order used everywhere a
/// per-group array or file column appears.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DemographicGroup {
    Families,
    CouplesWithoutChildren,
    Retired,
    SharedFlats,
    Singles,
}

impl DemographicGroup {
    pub const COUNT: usize = 5;

    pub const ALL: [DemographicGroup; Self::COUNT] = [
        DemographicGroup::Families,
        DemographicGroup::CouplesWithoutChildren,
        DemographicGroup::Retired,
        DemographicGroup::SharedFlats,
        DemographicGroup::Singles,
    ];

    /// Position in the canonical order.
    pub fn index(self) -> usize {
        self as usize
    }

    /// Stable name used in files and reports.
    pub fn name(self) -> &'static str {
        match self {
            DemographicGroup::Families => "Families",
            DemographicGroup::CouplesWithoutChildren => "CouplesWithoutChildren",
            DemographicGroup::Retired => "Retired",
            DemographicGroup::SharedFlats => "SharedFlats",
            DemographicGroup::Singles => "Singles",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|g| g.name() == name)
    }
}

impl std::fmt::Display for DemographicGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum MatrixError {
    #[error("row for household size {size} sums to {sum}; each row must sum to 1")]
    RowNotStochastic { size: &'static str, sum: f64 },
    #[error("entry for household size {size}, group {group} is {value}; entries must lie in [0, 1]")]
    EntryOutOfRange {
        size: &'static str,
        group: DemographicGroup,
        value: f64,
    },
}

/// Row-stochastic matrix giving, for each household-size bin, the probability
/// that a household of that size belongs to each demographic group.
#[derive(Debug, Clone, PartialEq)]
pub struct DistributionMatrix<F> {
    rows: [[F; DemographicGroup::COUNT]; SIZE_BINS],
}

/// Survey shares in percent per household size, in canonical group order.
/// The five-person row totals 99 and is renormalized on construction.
const DEFAULT_SHARES_PCT: [[f64; DemographicGroup::COUNT]; SIZE_BINS] = [
    [0.0, 0.0, 35.0, 0.0, 65.0],
    [15.0, 47.0, 31.0, 7.0, 0.0],
    [89.0, 8.0, 0.0, 3.0, 0.0],
    [96.0, 3.0, 0.0, 1.0, 0.0],
    [96.0, 2.0, 0.0, 1.0, 0.0],
    [90.0, 6.0, 0.0, 4.0, 0.0],
];

/// Tolerance on row sums; rows further than this from 1 are rejected.
const ROW_SUM_TOLERANCE: f64 = 1e-9;

impl<F: Float> DistributionMatrix<F> {
    pub fn from_rows(rows: [[F; DemographicGroup::COUNT]; SIZE_BINS]) -> Result<Self, MatrixError> {
        for (size, row) in rows.iter().enumerate() {
            let mut sum = F::zero();
            for (group, &entry) in row.iter().enumerate() {
                if !(entry >= F::zero() && entry <= F::one()) {
                    return Err(MatrixError::EntryOutOfRange {
                        size: size_bin_label(size),
                        group: DemographicGroup::ALL[group],
                        value: entry.to_f64().unwrap_or(f64::NAN),
                    });
                }
                sum = sum + entry;
            }
            if (sum - F::one()).abs() > cast::<F>(ROW_SUM_TOLERANCE) {
                return Err(MatrixError::RowNotStochastic {
                    size: size_bin_label(size),
                    sum: sum.to_f64().unwrap_or(f64::NAN),
                });
            }
        }
        Ok(Self { rows })
    }

    pub fn row(&self, size_bin: usize) -> &[F; DemographicGroup::COUNT] {
        &self.rows[size_bin]
    }

    pub fn probability(&self, size_bin: usize, group: DemographicGroup) -> F {
        self.rows[size_bin][group.index()]
    }
}

impl<F: Float> Default for DistributionMatrix<F> {
    /// Survey-derived default shares, with each row normalized by its own sum
    /// so the matrix is exactly row-stochastic.
    fn default() -> Self {
        let mut rows = [[F::zero(); DemographicGroup::COUNT]; SIZE_BINS];
        for (size, shares) in DEFAULT_SHARES_PCT.iter().enumerate() {
            let total: f64 = shares.iter().sum();
            for (group, &pct) in shares.iter().enumerate() {
                rows[size][group] = cast::<F>(pct / total);
            }
        }
        Self::from_rows(rows).expect("default distribution matrix is row-stochastic")
    }
}

/// Expected household counts per demographic group for one cell.
#[derive(Debug, Clone, PartialEq)]
pub struct DemographicHouseholds<F> {
    pub cell_id: String,
    counts: [F; DemographicGroup::COUNT],
}

impl<F: Float> DemographicHouseholds<F> {
    pub fn new(cell_id: impl Into<String>, counts: [F; DemographicGroup::COUNT]) -> Self {
        Self {
            cell_id: cell_id.into(),
            counts,
        }
    }

    pub fn count(&self, group: DemographicGroup) -> F {
        self.counts[group.index()]
    }

    pub fn counts(&self) -> &[F; DemographicGroup::COUNT] {
        &self.counts
    }

    pub fn total(&self) -> F {
        self.counts.iter().fold(F::zero(), |acc, &c| acc + c)
    }
}

/// Expected per-group household counts for a cell: the size-bin counts pushed
/// through the distribution matrix.
pub fn distribute<F: Float>(
    cell: &GridCell<F>,
    matrix: &DistributionMatrix<F>,
) -> DemographicHouseholds<F> {
    let mut counts = [F::zero(); DemographicGroup::COUNT];
    for (size, &households) in cell.households_by_size().iter().enumerate() {
        for (group, &share) in matrix.row(size).iter().enumerate() {
            counts[group] = counts[group] + households * share;
        }
    }
    DemographicHouseholds::new(cell.id.clone(), counts)
}
