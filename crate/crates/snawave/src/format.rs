//! Mesh and decomposition files, binary and CSV. The layouts are described in
//! `docs/formats.md`.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use snawave_core::{DyadicMesh, WaveletDecomposition};

use crate::error::{AppError, AppResult};

pub const MESH_MAGIC: &[u8; 4] = b"SNWM";
pub const DECOMPOSITION_MAGIC: &[u8; 4] = b"SNWD";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Binary,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Binary => "bin",
        }
    }
}

/// Shortest decimal that reads back to the same double.
pub fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

fn create(path: &Path) -> AppResult<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| AppError::io(path, e))
}

fn open(path: &Path) -> AppResult<BufReader<File>> {
    File::open(path).map(BufReader::new).map_err(|e| AppError::io(path, e))
}

fn bad(path: &Path, message: impl Into<String>) -> AppError {
    AppError::Format { path: path.to_path_buf(), message: message.into() }
}

pub fn csv_writer(path: &Path) -> AppResult<csv::Writer<BufWriter<File>>> {
    Ok(csv::Writer::from_writer(create(path)?))
}

pub fn csv_error(path: &Path, e: csv::Error) -> AppError {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => AppError::io(path, io),
        other => bad(path, format!("{other:?}")),
    }
}

fn write_header(w: &mut impl Write, magic: &[u8; 4], fields: &[u32]) -> std::io::Result<()> {
    w.write_all(magic)?;
    w.write_all(&FORMAT_VERSION.to_le_bytes())?;
    for f in fields {
        w.write_all(&f.to_le_bytes())?;
    }
    Ok(())
}

fn write_f64s(w: &mut impl Write, values: &[f64]) -> std::io::Result<()> {
    for v in values {
        w.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

fn read_u32(r: &mut impl Read) -> std::io::Result<u32> {
    let mut b = [0; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn read_f64s(r: &mut impl Read, n: usize) -> std::io::Result<Vec<f64>> {
    let mut buf = vec![0u8; n * 8];
    r.read_exact(&mut buf)?;
    Ok(buf.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect())
}

fn read_header(r: &mut impl Read, path: &Path, magic: &[u8; 4]) -> AppResult<()> {
    let mut m = [0; 4];
    r.read_exact(&mut m).map_err(|e| AppError::io(path, e))?;
    if &m != magic {
        return Err(bad(path, format!("expected magic {:?}", std::str::from_utf8(magic).unwrap())));
    }
    let version = read_u32(r).map_err(|e| AppError::io(path, e))?;
    if version != FORMAT_VERSION {
        return Err(bad(path, format!("unsupported format version {version}")));
    }
    Ok(())
}

fn check_trailing(r: &mut impl Read, path: &Path) -> AppResult<()> {
    let mut rest = [0u8; 1];
    match r.read(&mut rest).map_err(|e| AppError::io(path, e))? {
        0 => Ok(()),
        _ => Err(bad(path, "trailing bytes after payload")),
    }
}

fn depth_field(path: &Path, depth: u32) -> AppResult<usize> {
    if !(1..=40).contains(&depth) {
        return Err(bad(path, format!("depth {depth} out of range")));
    }
    Ok(1usize << depth)
}

pub fn write_mesh(path: &Path, mesh: &DyadicMesh, format: Format) -> AppResult<()> {
    match format {
        Format::Binary => {
            let mut w = create(path)?;
            write_header(&mut w, MESH_MAGIC, &[mesh.depth()])
                .and_then(|_| write_f64s(&mut w, mesh.values()))
                .and_then(|_| w.flush())
                .map_err(|e| AppError::io(path, e))
        }
        Format::Csv => {
            let mut w = csv_writer(path)?;
            w.write_record(["index", "z"]).map_err(|e| csv_error(path, e))?;
            for (i, v) in mesh.values().iter().enumerate() {
                w.write_record([i.to_string(), fmt_f64(*v)]).map_err(|e| csv_error(path, e))?;
            }
            w.flush().map_err(|e| AppError::io(path, e))
        }
    }
}

pub fn read_mesh(path: &Path, format: Format) -> AppResult<DyadicMesh> {
    let values = match format {
        Format::Binary => {
            let mut r = open(path)?;
            read_header(&mut r, path, MESH_MAGIC)?;
            let depth = read_u32(&mut r).map_err(|e| AppError::io(path, e))?;
            let len = depth_field(path, depth)?;
            let values = read_f64s(&mut r, len).map_err(|e| AppError::io(path, e))?;
            check_trailing(&mut r, path)?;
            values
        }
        Format::Csv => {
            let mut r = csv::Reader::from_reader(open(path)?);
            let mut values = Vec::new();
            for (expected, record) in r.records().enumerate() {
                let record = record.map_err(|e| csv_error(path, e))?;
                let index: usize = parse_field(path, &record, 0)?;
                if index != expected {
                    return Err(bad(path, format!("row {expected} has index {index}")));
                }
                values.push(parse_field(path, &record, 1)?);
            }
            values
        }
    };
    DyadicMesh::new(values).map_err(|e| bad(path, e.to_string()))
}

fn parse_field<T: std::str::FromStr>(path: &Path, record: &csv::StringRecord, i: usize) -> AppResult<T> {
    let field = record.get(i).ok_or_else(|| bad(path, format!("missing column {i}")))?;
    field.trim().parse().map_err(|_| bad(path, format!("cannot parse {field:?}")))
}

/// A decomposition together with the order of the filter that produced it.
#[derive(Clone, Debug, PartialEq)]
pub struct StoredDecomposition {
    pub vanishing_moments: u32,
    pub decomposition: WaveletDecomposition,
}

pub fn write_decomposition(path: &Path, stored: &StoredDecomposition, format: Format) -> AppResult<()> {
    let dec = &stored.decomposition;
    match format {
        Format::Binary => {
            let mut w = create(path)?;
            write_header(&mut w, DECOMPOSITION_MAGIC, &[dec.depth() as u32, stored.vanishing_moments])
                .and_then(|_| write_f64s(&mut w, &dec.to_flat()))
                .and_then(|_| w.flush())
                .map_err(|e| AppError::io(path, e))
        }
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().flexible(true).from_writer(create(path)?);
            let e = |e| csv_error(path, e);
            w.write_record(["J", "p"]).map_err(e)?;
            w.write_record([dec.depth().to_string(), stored.vanishing_moments.to_string()]).map_err(e)?;
            w.write_record(["level", "index", "value"]).map_err(e)?;
            w.write_record(["a0".to_string(), "0".to_string(), fmt_f64(dec.a0())]).map_err(e)?;
            for (j, level) in dec.levels().iter().enumerate() {
                for (n, v) in level.iter().enumerate() {
                    w.write_record([j.to_string(), n.to_string(), fmt_f64(*v)]).map_err(e)?;
                }
            }
            w.flush().map_err(|e| AppError::io(path, e))
        }
    }
}

pub fn read_decomposition(path: &Path, format: Format) -> AppResult<StoredDecomposition> {
    match format {
        Format::Binary => {
            let mut r = open(path)?;
            read_header(&mut r, path, DECOMPOSITION_MAGIC)?;
            let depth = read_u32(&mut r).map_err(|e| AppError::io(path, e))?;
            let p = read_u32(&mut r).map_err(|e| AppError::io(path, e))?;
            let len = depth_field(path, depth)?;
            let flat = read_f64s(&mut r, len).map_err(|e| AppError::io(path, e))?;
            check_trailing(&mut r, path)?;
            let decomposition = WaveletDecomposition::from_flat(&flat).map_err(|e| bad(path, e.to_string()))?;
            Ok(StoredDecomposition { vanishing_moments: p, decomposition })
        }
        Format::Csv => {
            let mut r = csv::ReaderBuilder::new().has_headers(false).flexible(true).from_reader(open(path)?);
            let mut records = r.records();
            let mut next = || -> AppResult<csv::StringRecord> {
                records.next().ok_or_else(|| bad(path, "unexpected end of file"))?.map_err(|e| csv_error(path, e))
            };
            next()?;
            let sizes = next()?;
            let depth: u32 = parse_field(path, &sizes, 0)?;
            let p: u32 = parse_field(path, &sizes, 1)?;
            let len = depth_field(path, depth)?;
            next()?;
            let first = next()?;
            if first.get(0) != Some("a0") {
                return Err(bad(path, "expected the a0 row"));
            }
            let mut flat = vec![parse_field(path, &first, 2)?];
            for j in 0..depth as usize {
                for n in 0..1usize << j {
                    let row = next()?;
                    let (rj, rn): (usize, usize) = (parse_field(path, &row, 0)?, parse_field(path, &row, 1)?);
                    if (rj, rn) != (j, n) {
                        return Err(bad(path, format!("expected level {j} index {n}, found {rj} {rn}")));
                    }
                    flat.push(parse_field(path, &row, 2)?);
                }
            }
            if flat.len() != len || records.next().is_some() {
                return Err(bad(path, "coefficient count does not match J"));
            }
            let decomposition = WaveletDecomposition::from_flat(&flat).map_err(|e| bad(path, e.to_string()))?;
            Ok(StoredDecomposition { vanishing_moments: p, decomposition })
        }
    }
}
