//! Compression-ratio comparison across codecs.
//!
//! Every row is produced by encoding, decoding and comparing against the
//! original, so a reported ratio always belongs to a verified round trip.
//! Sizes include all headers the codec writes.

use std::fmt::{self, Write as _};
use std::fs;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

use crate::baselines::{self, BaselineError, Prlc1Stream};
use crate::codec::{self, CodecError, CodecParams};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("compressed size is zero")]
    ZeroCompressedSize,
    #[error("the corpus is empty")]
    EmptyCorpus,
    #[error("duplicate corpus item name {0:?}")]
    DuplicateItem(String),
    #[error("unknown codec {0:?} (expected ort, prlc1, prlc2 or stored)")]
    UnknownCodec(String),
    #[error("unknown report format {0:?} (expected csv or markdown)")]
    UnknownFormat(String),
    #[error(transparent)]
    Params(#[from] CodecError),
    #[error("reading corpus: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Codec {
    Ort,
    Prlc1,
    Prlc2,
    Stored,
}

impl Codec {
    pub const ALL: [Codec; 4] = [Codec::Ort, Codec::Prlc1, Codec::Prlc2, Codec::Stored];

    pub fn name(self) -> &'static str {
        match self {
            Codec::Ort => "ort",
            Codec::Prlc1 => "prlc1",
            Codec::Prlc2 => "prlc2",
            Codec::Stored => "stored",
        }
    }

    fn column_title(self) -> &'static str {
        match self {
            Codec::Ort => "ORT",
            Codec::Prlc1 => "PRLC1",
            Codec::Prlc2 => "PRLC2",
            Codec::Stored => "Stored",
        }
    }

    /// Encodes, decodes and verifies; returns the encoded size.
    fn measure(self, data: &[u8], params: &CodecParams) -> Result<u64, RowError> {
        let (size, decoded) = match self {
            Codec::Ort => {
                let packed = codec::compress(data, params)?;
                (packed.len(), codec::decompress(&packed)?)
            }
            Codec::Stored => {
                let packed = codec::compress(data, &CodecParams::new(0, params.min_run))?;
                (packed.len(), codec::decompress(&packed)?)
            }
            Codec::Prlc1 => {
                let packed = baselines::prlc1_encode(data).to_bytes();
                (
                    packed.len(),
                    baselines::prlc1_decode(&Prlc1Stream::from_bytes(&packed)?)?,
                )
            }
            Codec::Prlc2 => {
                let packed = baselines::prlc2_encode(data)?;
                (packed.len(), baselines::prlc2_decode(&packed)?)
            }
        };
        if decoded != data {
            return Err(RowError::RoundTripMismatch);
        }
        Ok(size as u64)
    }
}

impl fmt::Display for Codec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Codec {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Codec::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| BenchError::UnknownCodec(s.to_string()))
    }
}

/// Why a row has no ratio. Rendered inline in reports.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RowError {
    UnsupportedAlphabet,
    RoundTripMismatch,
    Codec(String),
}

impl fmt::Display for RowError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RowError::UnsupportedAlphabet => f.write_str("UnsupportedAlphabet"),
            RowError::RoundTripMismatch => f.write_str("RoundTripMismatch"),
            RowError::Codec(msg) => f.write_str(msg),
        }
    }
}

impl From<CodecError> for RowError {
    fn from(e: CodecError) -> Self {
        RowError::Codec(e.to_string())
    }
}

impl From<BaselineError> for RowError {
    fn from(e: BaselineError) -> Self {
        match e {
            BaselineError::UnsupportedAlphabet { .. } => RowError::UnsupportedAlphabet,
            other => RowError::Codec(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusItem {
    pub name: String,
    pub bytes: Vec<u8>,
}

impl CorpusItem {
    pub fn new(name: impl Into<String>, bytes: impl Into<Vec<u8>>) -> Self {
        Self {
            name: name.into(),
            bytes: bytes.into(),
        }
    }
}

/// Regular files directly inside `dir`, ordered by file name.
pub fn load_corpus(dir: &Path) -> Result<Vec<CorpusItem>, BenchError> {
    let mut items = Vec::new();
    for entry in fs::read_dir(dir)? {
        let entry = entry?;
        if !entry.file_type()?.is_file() {
            continue;
        }
        let name = entry.file_name().to_string_lossy().into_owned();
        items.push(CorpusItem::new(name, fs::read(entry.path())?));
    }
    items.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(items)
}

pub fn compression_ratio(uncompressed: u64, compressed: u64) -> Result<f64, BenchError> {
    if compressed == 0 {
        return Err(BenchError::ZeroCompressedSize);
    }
    Ok(uncompressed as f64 / compressed as f64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    /// 1-based position of the item in the corpus.
    pub index: usize,
    pub item: String,
    pub codec: Codec,
    pub uncompressed: u64,
    pub compressed: Result<u64, RowError>,
}

impl BenchRow {
    /// Ratio for a successful row; an empty input counts as 1.0.
    pub fn cr(&self) -> Option<f64> {
        let compressed = *self.compressed.as_ref().ok()?;
        if self.uncompressed == 0 {
            return Some(1.0);
        }
        compression_ratio(self.uncompressed, compressed).ok()
    }

    fn cr_cell(&self) -> String {
        match (&self.compressed, self.cr()) {
            (Ok(_), Some(cr)) => format!("{cr:.3}"),
            (Err(e), _) => format!("error:{e}"),
            (Ok(_), None) => "error:ZeroCompressedSize".to_string(),
        }
    }
}

/// One row per (item, codec), in corpus order then codec order. Codec
/// failures are recorded in the row; the run continues.
pub fn run_bench(corpus: &[CorpusItem], codecs: &[Codec], params: &CodecParams) -> Result<Vec<BenchRow>, BenchError> {
    if corpus.is_empty() {
        return Err(BenchError::EmptyCorpus);
    }
    params.validate()?;
    let mut seen = std::collections::HashSet::new();
    for item in corpus {
        if !seen.insert(item.name.as_str()) {
            return Err(BenchError::DuplicateItem(item.name.clone()));
        }
    }

    let rows = corpus
        .par_iter()
        .enumerate()
        .flat_map_iter(|(i, item)| {
            codecs.iter().map(move |&codec| BenchRow {
                index: i + 1,
                item: item.name.clone(),
                codec,
                uncompressed: item.bytes.len() as u64,
                compressed: codec.measure(&item.bytes, params),
            })
        })
        .collect();
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Markdown,
}

impl FromStr for ReportFormat {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(ReportFormat::Csv),
            "markdown" | "md" => Ok(ReportFormat::Markdown),
            _ => Err(BenchError::UnknownFormat(s.to_string())),
        }
    }
}

pub fn render_report(rows: &[BenchRow], format: ReportFormat) -> String {
    match format {
        ReportFormat::Csv => render_csv(rows),
        ReportFormat::Markdown => render_markdown(rows),
    }
}

fn render_csv(rows: &[BenchRow]) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record(["index", "item", "codec", "uncompressed", "compressed", "cr"])
        .expect("writing to memory");
    for row in rows {
        let compressed = row.compressed.as_ref().map(u64::to_string).unwrap_or_default();
        writer
            .write_record([
                row.index.to_string().as_str(),
                row.item.as_str(),
                row.codec.name(),
                row.uncompressed.to_string().as_str(),
                compressed.as_str(),
                row.cr_cell().as_str(),
            ])
            .expect("writing to memory");
    }
    let bytes = writer.into_inner().expect("flushing to memory");
    String::from_utf8(bytes).expect("csv output is utf-8")
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Column {
    Codec(Codec),
    DfRlc,
}

fn render_markdown(rows: &[BenchRow]) -> String {
    // ORT first, then the prior-art columns, stored last
    let present = |c: Codec| rows.iter().any(|r| r.codec == c);
    let mut columns = Vec::new();
    if present(Codec::Ort) {
        columns.push(Column::Codec(Codec::Ort));
    }
    columns.push(Column::DfRlc);
    for c in [Codec::Prlc2, Codec::Prlc1, Codec::Stored] {
        if present(c) {
            columns.push(Column::Codec(c));
        }
    }

    let mut out = String::from("| # | Item |");
    for col in &columns {
        let title = match col {
            Column::Codec(c) => c.column_title(),
            Column::DfRlc => "DF-RLC",
        };
        write!(out, " {title} |").unwrap();
    }
    out.push_str("\n|---:|---|");
    for _ in &columns {
        out.push_str("---:|");
    }
    out.push('\n');

    for group in rows.chunk_by(|a, b| a.index == b.index) {
        let first = &group[0];
        write!(out, "| {} | {} |", first.index, first.item.replace('|', "\\|")).unwrap();
        for col in &columns {
            let cell = match col {
                Column::DfRlc => "n/a".to_string(),
                Column::Codec(c) => group
                    .iter()
                    .find(|r| r.codec == *c)
                    .map(BenchRow::cr_cell)
                    .unwrap_or_else(|| "-".to_string()),
            };
            write!(out, " {cell} |").unwrap();
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_examples() {
        assert_eq!(format!("{:.3}", compression_ratio(100, 100).unwrap()), "1.000");
        assert_eq!(format!("{:.3}", compression_ratio(65536, 9380).unwrap()), "6.987");
        assert!(matches!(compression_ratio(5, 0), Err(BenchError::ZeroCompressedSize)));
    }

    #[test]
    fn cr_formatting_to_three_places() {
        let row = BenchRow {
            index: 2,
            item: "Gray-21".into(),
            codec: Codec::Ort,
            uncompressed: 625_961,
            compressed: Ok(1000),
        };
        assert_eq!(row.cr_cell(), "625.961");
    }

    #[test]
    fn empty_item_reports_unit_ratio() {
        let rows = run_bench(
            &[CorpusItem::new("empty", vec![])],
            &Codec::ALL,
            &CodecParams::default(),
        )
        .unwrap();
        for row in rows {
            assert_eq!(row.cr(), Some(1.0), "{}", row.codec);
        }
    }

    #[test]
    fn codec_and_format_names() {
        assert_eq!("PRLC2".parse::<Codec>().unwrap(), Codec::Prlc2);
        assert!("dfrlc".parse::<Codec>().is_err());
        assert_eq!("md".parse::<ReportFormat>().unwrap(), ReportFormat::Markdown);
        assert!("xml".parse::<ReportFormat>().is_err());
    }

    #[test]
    fn constant_item_ort_beats_stored() {
        let corpus = [CorpusItem::new("zeros", vec![0u8; 65536])];
        let rows = run_bench(&corpus, &[Codec::Ort, Codec::Stored], &CodecParams::default()).unwrap();
        let ort = rows[0].cr().unwrap();
        let stored = rows[1].cr().unwrap();
        assert!(ort > stored);
        assert_eq!(rows[1].compressed, Ok(65536 + 16));
        assert!((stored - 0.9998).abs() < 1e-4);
    }

    #[test]
    fn prlc2_alphabet_errors_are_inline() {
        let corpus = [
            CorpusItem::new("high", vec![0xC8; 10]),
            CorpusItem::new("low", vec![1; 10]),
        ];
        let rows = run_bench(&corpus, &[Codec::Prlc2], &CodecParams::default()).unwrap();
        assert_eq!(rows[0].compressed, Err(RowError::UnsupportedAlphabet));
        assert!(rows[1].compressed.is_ok());
        let csv = render_report(&rows, ReportFormat::Csv);
        assert!(csv.contains("1,high,prlc2,10,,error:UnsupportedAlphabet"));
    }

    #[test]
    fn bench_input_errors() {
        assert!(matches!(
            run_bench(&[], &Codec::ALL, &CodecParams::default()),
            Err(BenchError::EmptyCorpus)
        ));
        let dup = [CorpusItem::new("a", vec![1]), CorpusItem::new("a", vec![2])];
        assert!(matches!(
            run_bench(&dup, &Codec::ALL, &CodecParams::default()),
            Err(BenchError::DuplicateItem(_))
        ));
    }

    #[test]
    fn markdown_layout() {
        let rows = run_bench(
            &[CorpusItem::new("a|b", vec![3u8; 300])],
            &[Codec::Prlc1, Codec::Ort],
            &CodecParams::default(),
        )
        .unwrap();
        let md = render_report(&rows, ReportFormat::Markdown);
        let lines: Vec<&str> = md.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0], "| # | Item | ORT | DF-RLC | PRLC1 |");
        assert!(lines[2].starts_with("| 1 | a\\|b | "));
        assert!(lines[2].contains("| n/a |"));
    }

    #[test]
    fn empty_reports_are_header_only() {
        assert_eq!(
            render_report(&[], ReportFormat::Csv),
            "index,item,codec,uncompressed,compressed,cr\n"
        );
        assert_eq!(render_report(&[], ReportFormat::Markdown).lines().count(), 2);
    }
}
