//! Loading, validation, min-max normalization and seeded splitting of the
//! story-point project table.
//!
//! The CSV layout is fixed:
//!
//! ```text
//! project_id,story_points,velocity,actual_effort
//! P1,156,2.7,63
//! ```
//!
//! Row numbers in error messages count data rows from 1 (the header is not
//! counted).

use std::collections::HashSet;
use std::fmt;
use std::io::{Read, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Expected header, in order.
pub const HEADER: [&str; 4] = ["project_id", "story_points", "velocity", "actual_effort"];

/// The 21-project story-point table shipped with the crate.
pub const BUNDLED_CSV: &str = include_str!("../data/zia2012.csv");
pub const BUNDLED_SOURCE: &str = "bundled:zia2012.csv";

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("file not found: {0}")]
    NotFound(String),
    #[error("i/o error reading {path}: {message}")]
    Io { path: String, message: String },
    #[error("malformed header: expected `{}`, found `{found}`", HEADER.join(","))]
    BadHeader { found: String },
    #[error("malformed row {row}: {message}")]
    MalformedRow { row: usize, message: String },
    #[error("non-numeric {column} at row {row}: `{value}`")]
    NonNumeric {
        row: usize,
        column: &'static str,
        value: String,
    },
    #[error("non-positive {column} at row {row}")]
    NonPositive { row: usize, column: &'static str },
    #[error("duplicate project_id `{id}` at row {row}")]
    DuplicateId { row: usize, id: String },
    #[error("dataset is empty")]
    Empty,
    #[error("degenerate column {0}")]
    DegenerateColumn(&'static str),
    #[error("test fraction must lie strictly between 0 and 1, got {0}")]
    BadFraction(f64),
    #[error("test size must be between 1 and {max}, got {got}")]
    BadTestSize { got: usize, max: usize },
    #[error("cannot split a dataset of {0} record(s); need at least 2")]
    TooSmall(usize),
}

/// One software project.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectRecord {
    pub project_id: String,
    pub story_points: f64,
    pub velocity: f64,
    pub actual_effort: f64,
}

impl ProjectRecord {
    pub fn new(id: impl Into<String>, story_points: f64, velocity: f64, actual_effort: f64) -> Self {
        ProjectRecord {
            project_id: id.into(),
            story_points,
            velocity,
            actual_effort,
        }
    }

    pub fn get(&self, column: Column) -> f64 {
        match column {
            Column::StoryPoints => self.story_points,
            Column::Velocity => self.velocity,
            Column::ActualEffort => self.actual_effort,
        }
    }

    fn set(&mut self, column: Column, value: f64) {
        match column {
            Column::StoryPoints => self.story_points = value,
            Column::Velocity => self.velocity = value,
            Column::ActualEffort => self.actual_effort = value,
        }
    }
}

/// Numeric columns of the project table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Column {
    StoryPoints,
    Velocity,
    ActualEffort,
}

impl Column {
    pub const ALL: [Column; 3] = [Column::StoryPoints, Column::Velocity, Column::ActualEffort];

    pub fn name(self) -> &'static str {
        match self {
            Column::StoryPoints => "story_points",
            Column::Velocity => "velocity",
            Column::ActualEffort => "actual_effort",
        }
    }
}

impl fmt::Display for Column {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Ordered collection of projects. Row order is significant: splits are
/// defined as permutations of row positions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub records: Vec<ProjectRecord>,
    pub source: String,
}

impl Dataset {
    /// Builds a dataset after checking every record invariant.
    pub fn new(records: Vec<ProjectRecord>, source: impl Into<String>) -> Result<Self, DatasetError> {
        if records.is_empty() {
            return Err(DatasetError::Empty);
        }
        let mut seen = HashSet::new();
        for (i, rec) in records.iter().enumerate() {
            let row = i + 1;
            for column in Column::ALL {
                let v = rec.get(column);
                if !(v > 0.0) || !v.is_finite() {
                    return Err(DatasetError::NonPositive {
                        row,
                        column: column.name(),
                    });
                }
            }
            if !seen.insert(rec.project_id.as_str()) {
                return Err(DatasetError::DuplicateId {
                    row,
                    id: rec.project_id.clone(),
                });
            }
        }
        Ok(Dataset {
            records,
            source: source.into(),
        })
    }

    /// The 21-project table bundled with the crate.
    pub fn bundled() -> Self {
        read_dataset(BUNDLED_CSV.as_bytes(), BUNDLED_SOURCE).expect("bundled dataset is valid")
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn column(&self, column: Column) -> Vec<f64> {
        self.records.iter().map(|r| r.get(column)).collect()
    }

    /// Rows at the given positions, in the given order.
    pub fn subset(&self, indices: &[usize]) -> Dataset {
        Dataset {
            records: indices.iter().map(|&i| self.records[i].clone()).collect(),
            source: self.source.clone(),
        }
    }
}

/// Reads a dataset from a CSV file on disk.
pub fn load_dataset(path: impl AsRef<Path>) -> Result<Dataset, DatasetError> {
    let path = path.as_ref();
    read_dataset(open(path)?, path.display().to_string())
}

/// Parses a dataset from any CSV reader. LF and CRLF line endings are
/// accepted. The first problem found is returned.
pub fn read_dataset<R: Read>(reader: R, source: impl Into<String>) -> Result<Dataset, DatasetError> {
    let diagnosis = diagnose(reader)?;
    if let Some(first) = diagnosis.problems.into_iter().next() {
        return Err(first);
    }
    Dataset::new(diagnosis.records, source)
}

/// Result of checking every row of a CSV file.
#[derive(Debug)]
pub struct Diagnosis {
    /// Rows that passed every check.
    pub records: Vec<ProjectRecord>,
    /// One entry per rejected row, in file order.
    pub problems: Vec<DatasetError>,
}

impl Diagnosis {
    pub fn is_clean(&self) -> bool {
        self.problems.is_empty() && !self.records.is_empty()
    }
}

/// Checks every row instead of stopping at the first bad one. File-level
/// problems (unreadable input, wrong header) are still returned as `Err`.
pub fn diagnose<R: Read>(reader: R) -> Result<Diagnosis, DatasetError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);

    let header = rdr
        .headers()
        .map_err(|e| DatasetError::BadHeader { found: e.to_string() })?;
    let header_fields: Vec<&str> = header.iter().map(|h| h.trim_start_matches('\u{feff}')).collect();
    if header_fields != HEADER {
        return Err(DatasetError::BadHeader {
            found: header_fields.join(","),
        });
    }

    let mut records = Vec::new();
    let mut problems = Vec::new();
    let mut seen = HashSet::new();
    for (i, row) in rdr.records().enumerate() {
        let row_no = i + 1;
        match row {
            Ok(row) => match parse_row(&row, row_no) {
                Ok(rec) => {
                    if seen.insert(rec.project_id.clone()) {
                        records.push(rec);
                    } else {
                        problems.push(DatasetError::DuplicateId {
                            row: row_no,
                            id: rec.project_id,
                        });
                    }
                }
                Err(e) => problems.push(e),
            },
            Err(e) => problems.push(DatasetError::MalformedRow {
                row: row_no,
                message: e.to_string(),
            }),
        }
    }
    if records.is_empty() && problems.is_empty() {
        problems.push(DatasetError::Empty);
    }
    Ok(Diagnosis { records, problems })
}

fn parse_row(row: &csv::StringRecord, row_no: usize) -> Result<ProjectRecord, DatasetError> {
    if row.len() != HEADER.len() {
        return Err(DatasetError::MalformedRow {
            row: row_no,
            message: format!("expected {} fields, found {}", HEADER.len(), row.len()),
        });
    }
    let id = row[0].to_string();
    if id.is_empty() {
        return Err(DatasetError::MalformedRow {
            row: row_no,
            message: "empty project_id".into(),
        });
    }
    let mut rec = ProjectRecord::new(id, 0.0, 0.0, 0.0);
    for (k, column) in Column::ALL.into_iter().enumerate() {
        let cell = &row[k + 1];
        let value: f64 = cell
            .parse()
            .ok()
            .filter(|v: &f64| v.is_finite())
            .ok_or_else(|| DatasetError::NonNumeric {
                row: row_no,
                column: column.name(),
                value: cell.to_string(),
            })?;
        if value <= 0.0 {
            return Err(DatasetError::NonPositive {
                row: row_no,
                column: column.name(),
            });
        }
        rec.set(column, value);
    }
    Ok(rec)
}

/// Opens a file and checks every row.
pub fn diagnose_file(path: impl AsRef<Path>) -> Result<Diagnosis, DatasetError> {
    diagnose(open(path.as_ref())?)
}

fn open(path: &Path) -> Result<std::fs::File, DatasetError> {
    let display = path.display().to_string();
    std::fs::File::open(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => DatasetError::NotFound(display),
        _ => DatasetError::Io {
            path: display,
            message: e.to_string(),
        },
    })
}

/// Writes the dataset in the same CSV layout `read_dataset` accepts.
/// Floats use Rust's shortest round-trip formatting.
pub fn write_dataset<W: Write>(data: &Dataset, writer: W) -> Result<(), csv::Error> {
    let mut wtr = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(writer);
    wtr.write_record(HEADER)?;
    for r in &data.records {
        wtr.write_record([
            r.project_id.clone(),
            r.story_points.to_string(),
            r.velocity.to_string(),
            r.actual_effort.to_string(),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

/// Min and max of a single column.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Range {
    pub min: f64,
    pub max: f64,
}

impl Range {
    pub fn scale(&self, x: f64) -> f64 {
        (x - self.min) / (self.max - self.min)
    }

    pub fn unscale(&self, x: f64) -> f64 {
        x * (self.max - self.min) + self.min
    }
}

/// Per-column extrema used for min-max scaling into [0, 1].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalizationParams {
    pub story_points: Range,
    pub velocity: Range,
    pub actual_effort: Range,
}

impl NormalizationParams {
    pub fn range(&self, column: Column) -> Range {
        match column {
            Column::StoryPoints => self.story_points,
            Column::Velocity => self.velocity,
            Column::ActualEffort => self.actual_effort,
        }
    }

    pub fn is_valid(&self) -> bool {
        Column::ALL.iter().all(|&c| {
            let r = self.range(c);
            r.min.is_finite() && r.max.is_finite() && r.max > r.min
        })
    }
}

/// Column-wise min and max over every record. Constant columns are rejected.
pub fn fit_normalizer(data: &Dataset) -> Result<NormalizationParams, DatasetError> {
    if data.is_empty() {
        return Err(DatasetError::Empty);
    }
    let fit = |column: Column| -> Result<Range, DatasetError> {
        let (min, max) = data
            .records
            .iter()
            .map(|r| r.get(column))
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
        if max > min {
            Ok(Range { min, max })
        } else {
            Err(DatasetError::DegenerateColumn(column.name()))
        }
    };
    Ok(NormalizationParams {
        story_points: fit(Column::StoryPoints)?,
        velocity: fit(Column::Velocity)?,
        actual_effort: fit(Column::ActualEffort)?,
    })
}

/// Scaled copy of a dataset. Values are not clipped, so rows outside the
/// fitted range map outside [0, 1].
///
/// The result can contain zeros and negatives, so it is built directly rather
/// than through [`Dataset::new`].
pub fn normalize(data: &Dataset, params: &NormalizationParams) -> Dataset {
    debug_assert!(params.is_valid());
    let records = data
        .records
        .iter()
        .map(|r| {
            let mut out = r.clone();
            for c in Column::ALL {
                out.set(c, params.range(c).scale(r.get(c)));
            }
            out
        })
        .collect();
    Dataset {
        records,
        source: data.source.clone(),
    }
}

/// Inverse of the min-max map for one column.
pub fn denormalize(values: &[f64], column: Column, params: &NormalizationParams) -> Vec<f64> {
    let range = params.range(column);
    values.iter().map(|&v| range.unscale(v)).collect()
}

/// Number of test rows for a fraction: `ceil(fraction * n)`, clamped so that
/// the training side keeps at least one row.
pub fn test_count(n: usize, test_fraction: f64) -> Result<usize, DatasetError> {
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(DatasetError::BadFraction(test_fraction));
    }
    if n < 2 {
        return Err(DatasetError::TooSmall(n));
    }
    // 0.2 * 15 = 3.0000000000000004 in binary; shave the noise before ceil.
    let raw = test_fraction * n as f64;
    let count = (raw - 1e-9).ceil() as usize;
    Ok(count.clamp(1, n - 1))
}

/// Seeded permutation of `0..n` (ChaCha8 + Fisher-Yates).
pub fn permutation(n: usize, seed: u64) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    idx.shuffle(&mut rng);
    idx
}

/// Row positions of a train/test split. The first `test_size` entries of the
/// seeded permutation form the test set, the rest the training set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitIndices {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

pub fn split_indices(n: usize, test_size: usize, seed: u64) -> Result<SplitIndices, DatasetError> {
    if n < 2 {
        return Err(DatasetError::TooSmall(n));
    }
    if test_size == 0 || test_size >= n {
        return Err(DatasetError::BadTestSize {
            got: test_size,
            max: n - 1,
        });
    }
    let perm = permutation(n, seed);
    let (test, train) = perm.split_at(test_size);
    Ok(SplitIndices {
        train: train.to_vec(),
        test: test.to_vec(),
    })
}

/// Shuffled train/test partition with `ceil(test_fraction * n)` test rows.
pub fn train_test_split(data: &Dataset, test_fraction: f64, seed: u64) -> Result<(Dataset, Dataset), DatasetError> {
    let count = test_count(data.len(), test_fraction)?;
    let idx = split_indices(data.len(), count, seed)?;
    Ok((data.subset(&idx.train), data.subset(&idx.test)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Result<Dataset, DatasetError> {
        read_dataset(s.as_bytes(), "test")
    }

    fn toy(values: &[(f64, f64, f64)]) -> Dataset {
        let recs = values
            .iter()
            .enumerate()
            .map(|(i, &(a, b, c))| ProjectRecord::new(format!("p{}", i + 1), a, b, c))
            .collect();
        Dataset::new(recs, "toy").unwrap()
    }

    #[test]
    fn single_row() {
        let d = parse("project_id,story_points,velocity,actual_effort\np1,100,3,50\n").unwrap();
        assert_eq!(d.records, vec![ProjectRecord::new("p1", 100.0, 3.0, 50.0)]);
    }

    #[test]
    fn crlf_and_bom() {
        let d = parse("\u{feff}project_id,story_points,velocity,actual_effort\r\np1,1.5,3,50\r\n").unwrap();
        assert_eq!(d.records[0].story_points, 1.5);
    }

    #[test]
    fn zero_story_points() {
        let err = parse("project_id,story_points,velocity,actual_effort\np1,100,3,50\np2,0,3,50\n").unwrap_err();
        assert_eq!(err.to_string(), "non-positive story_points at row 2");
    }

    #[test]
    fn bad_inputs() {
        let h = "project_id,story_points,velocity,actual_effort\n";
        assert!(matches!(
            parse("id,sp,v,e\np1,1,1,1\n"),
            Err(DatasetError::BadHeader { .. })
        ));
        assert!(matches!(
            parse(&format!("{h}p1,abc,1,1\n")),
            Err(DatasetError::NonNumeric {
                row: 1,
                column: "story_points",
                ..
            })
        ));
        assert!(matches!(
            parse(&format!("{h}p1,1,1,1\np1,2,2,2\n")),
            Err(DatasetError::DuplicateId { row: 2, .. })
        ));
        assert!(matches!(
            parse(&format!("{h}p1,1,-1,1\n")),
            Err(DatasetError::NonPositive {
                row: 1,
                column: "velocity"
            })
        ));
        assert!(matches!(
            parse(&format!("{h}p1,1,1\n")),
            Err(DatasetError::MalformedRow { row: 1, .. })
        ));
        assert!(matches!(parse(h), Err(DatasetError::Empty)));
    }

    #[test]
    fn diagnose_reports_every_bad_row() {
        let text = "project_id,story_points,velocity,actual_effort\np1,1,1,1\np2,0,1,1\np3,1,x,1\np1,2,2,2\np5,3,3,3\n";
        let d = diagnose(text.as_bytes()).unwrap();
        assert_eq!(d.records.len(), 2);
        let msgs: Vec<String> = d.problems.iter().map(ToString::to_string).collect();
        assert_eq!(
            msgs,
            [
                "non-positive story_points at row 2",
                "non-numeric velocity at row 3: `x`",
                "duplicate project_id `p1` at row 4"
            ]
        );
        assert!(!d.is_clean());
    }

    #[test]
    fn missing_file() {
        let err = load_dataset("/nonexistent/for/sure.csv").unwrap_err();
        assert!(matches!(err, DatasetError::NotFound(_)));
    }

    #[test]
    fn bundled_has_21_projects() {
        assert_eq!(Dataset::bundled().len(), 21);
    }

    #[test]
    fn normalizer_extrema() {
        let d = toy(&[(2.0, 1.0, 1.0), (4.0, 2.0, 3.0), (6.0, 5.0, 2.0)]);
        let p = fit_normalizer(&d).unwrap();
        assert_eq!(p.story_points, Range { min: 2.0, max: 6.0 });
        let n = normalize(&d, &p);
        assert_eq!(n.column(Column::StoryPoints), vec![0.0, 0.5, 1.0]);
        assert_eq!(
            denormalize(&[0.0, 0.5, 1.0], Column::StoryPoints, &p),
            vec![2.0, 4.0, 6.0]
        );
        assert_eq!(denormalize(&[0.0], Column::Velocity, &p), vec![1.0]);
    }

    #[test]
    fn degenerate_column() {
        let d = toy(&[(5.0, 1.0, 1.0), (5.0, 2.0, 3.0), (5.0, 5.0, 2.0)]);
        assert_eq!(
            fit_normalizer(&d).unwrap_err().to_string(),
            "degenerate column story_points"
        );
    }

    #[test]
    fn no_clipping() {
        let d = toy(&[(2.0, 1.0, 1.0), (6.0, 2.0, 3.0)]);
        let p = fit_normalizer(&d).unwrap();
        let out = normalize(&toy(&[(10.0, 0.5, 1.0)]), &p);
        assert_eq!(out.records[0].story_points, 2.0);
        assert_eq!(out.records[0].velocity, -0.5);
    }

    #[test]
    fn split_sizes() {
        let d = Dataset::bundled();
        let (train, test) = train_test_split(&d, 0.2, 120).unwrap();
        assert_eq!((train.len(), test.len()), (16, 5));

        let two = toy(&[(1.0, 1.0, 1.0), (2.0, 2.0, 2.0)]);
        let (a, b) = train_test_split(&two, 0.2, 0).unwrap();
        assert_eq!((a.len(), b.len()), (1, 1));
        assert_eq!(test_count(15, 0.2).unwrap(), 3);
    }

    #[test]
    fn split_is_deterministic() {
        let d = toy(&(1..=10).map(|i| (i as f64, i as f64, i as f64)).collect::<Vec<_>>());
        let a = train_test_split(&d, 0.5, 7).unwrap();
        let b = train_test_split(&d, 0.5, 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.1.len(), 5);
    }

    #[test]
    fn split_errors() {
        let one = toy(&[(1.0, 1.0, 1.0)]);
        assert!(matches!(train_test_split(&one, 0.2, 0), Err(DatasetError::TooSmall(1))));
        let d = Dataset::bundled();
        assert!(matches!(
            train_test_split(&d, 0.0, 0),
            Err(DatasetError::BadFraction(_))
        ));
        assert!(matches!(
            train_test_split(&d, 1.0, 0),
            Err(DatasetError::BadFraction(_))
        ));
    }

    #[test]
    fn write_then_read() {
        let d = Dataset::bundled();
        let mut buf = Vec::new();
        write_dataset(&d, &mut buf).unwrap();
        let back = read_dataset(buf.as_slice(), d.source.clone()).unwrap();
        assert_eq!(back, d);
    }
}
