//! Published accuracy figures, transcribed verbatim into `data/published.csv`.
//!
//! Values are kept as the literal strings from the source tables so that
//! rendered reports reproduce them byte for byte. An empty cell means the
//! table has no such column; `NA` means the column exists but the source
//! reported nothing.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const PUBLISHED_CSV: &str = include_str!("../data/published.csv");

/// SHA-256 of `data/published.csv`. Any edit to the constants file must
/// update this value.
pub const PUBLISHED_SHA256: &str = "298ccc52bbe5c0aee7b16904e9c75f799032ba0cc77b0f8022be168779c4f77c";

/// Metric columns, in file order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Mse,
    Mmre,
    Mmer,
    Mdmre,
    Mdmer,
    Pred8,
    Pred25,
    RSquared,
    Rmse,
}

impl Metric {
    pub fn heading(self) -> &'static str {
        match self {
            Metric::Mse => "MSE",
            Metric::Mmre => "MMRE",
            Metric::Mmer => "MMER",
            Metric::Mdmre => "MdMRE",
            Metric::Mdmer => "MdMER",
            Metric::Pred8 => "PRED (8%)",
            Metric::Pred25 => "PRED (25%)",
            Metric::RSquared => "R^2",
            Metric::Rmse => "RMSE",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PublishedRow {
    pub table: u8,
    pub key: String,
    pub reference: String,
    pub mse: String,
    pub mmre: String,
    pub mmer: String,
    pub mdmre: String,
    pub mdmer: String,
    pub pred8: String,
    pub pred25: String,
    pub r_squared: String,
    pub rmse: String,
}

impl PublishedRow {
    pub fn cell(&self, metric: Metric) -> &str {
        match metric {
            Metric::Mse => &self.mse,
            Metric::Mmre => &self.mmre,
            Metric::Mmer => &self.mmer,
            Metric::Mdmre => &self.mdmre,
            Metric::Mdmer => &self.mdmer,
            Metric::Pred8 => &self.pred8,
            Metric::Pred25 => &self.pred25,
            Metric::RSquared => &self.r_squared,
            Metric::Rmse => &self.rmse,
        }
    }

    /// Parsed numeric value, `None` for empty or `NA` cells.
    pub fn value(&self, metric: Metric) -> Option<f64> {
        self.cell(metric).parse().ok()
    }
}

/// Columns shown for each comparison table.
pub fn table_columns(table: u8) -> &'static [Metric] {
    use Metric::*;
    match table {
        2 => &[Mmre, Mmer, Mdmre, Mdmer, Pred8, Pred25],
        3 => &[Mmre, Pred25],
        4 => &[Pred25, RSquared, Mse, Rmse],
        5 => &[Mse, Mmre, Mmer, Mdmre, Mdmer, Pred8, Pred25],
        _ => &[],
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn checksum_ok() -> bool {
    sha256_hex(PUBLISHED_CSV.as_bytes()) == PUBLISHED_SHA256
}

/// All transcribed rows in file order.
pub fn rows() -> Vec<PublishedRow> {
    csv::Reader::from_reader(PUBLISHED_CSV.as_bytes())
        .deserialize()
        .collect::<Result<_, _>>()
        .expect("published.csv is well formed")
}

pub fn table(table: u8) -> Vec<PublishedRow> {
    rows().into_iter().filter(|r| r.table == table).collect()
}

/// A published Table 2 row by key, e.g. `table2-lasso-tuned`.
pub fn by_key(key: &str) -> Option<PublishedRow> {
    rows().into_iter().find(|r| r.key == key)
}
