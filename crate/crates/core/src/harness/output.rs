//! CSV output. Floats use Rust's shortest round-trip formatting; line
//! endings are LF.

use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use crate::harness::analysis::AnalysisRow;
use crate::harness::sweep::BerRecord;

pub const BER_HEADER: [&str; 7] = ["receiver", "snr_db", "frames", "bits", "bit_errors", "ber", "mean_sinr_db"];

pub const ANALYSIS_HEADER: [&str; 8] = [
    "snr_db",
    "realizations",
    "mean_gp",
    "median_gp",
    "fraction_gp_above_one",
    "mean_sig_ratio",
    "mean_sinr_ddr_db",
    "mean_sinr_dp_db",
];

fn csv_writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out)
}

fn into_io(err: csv::Error) -> io::Error {
    match err.into_kind() {
        csv::ErrorKind::Io(e) => e,
        other => io::Error::other(format!("{other:?}")),
    }
}

pub fn emit_csv<W: Write>(records: &[BerRecord], out: W) -> io::Result<()> {
    let mut w = csv_writer(out);
    w.write_record(BER_HEADER).map_err(into_io)?;
    for r in records {
        w.write_record([
            r.receiver.name().to_string(),
            r.snr_db.to_string(),
            r.frames.to_string(),
            r.bits.to_string(),
            r.bit_errors.to_string(),
            r.ber.to_string(),
            r.mean_sinr_db.map(|v| v.to_string()).unwrap_or_default(),
        ])
        .map_err(into_io)?;
    }
    w.flush()
}

pub fn write_csv(records: &[BerRecord], path: &Path) -> io::Result<()> {
    emit_csv(records, File::create(path)?)
}

pub fn emit_analysis_csv<W: Write>(rows: &[AnalysisRow], out: W) -> io::Result<()> {
    let mut w = csv_writer(out);
    w.write_record(ANALYSIS_HEADER).map_err(into_io)?;
    for r in rows {
        w.write_record([
            r.snr_db.to_string(),
            r.realizations.to_string(),
            r.mean_gp.to_string(),
            r.median_gp.to_string(),
            r.fraction_gp_above_one.to_string(),
            r.mean_sig_ratio.to_string(),
            r.mean_sinr_ddr_db.to_string(),
            r.mean_sinr_dp_db.to_string(),
        ])
        .map_err(into_io)?;
    }
    w.flush()
}

pub fn write_analysis_csv(rows: &[AnalysisRow], path: &Path) -> io::Result<()> {
    emit_analysis_csv(rows, File::create(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::config::Receiver;

    fn record() -> BerRecord {
        BerRecord {
            receiver: Receiver::Ddr,
            snr_db: 7.5,
            frames: 3,
            bits: 6144,
            bit_errors: 7,
            ber: 7.0 / 6144.0,
            mean_sinr_db: Some(12.345678901234567),
        }
    }

    #[test]
    fn empty_list_is_header_only() {
        let mut buf = Vec::new();
        emit_csv(&[], &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "receiver,snr_db,frames,bits,bit_errors,ber,mean_sinr_db\n");
    }

    #[test]
    fn record_round_trips() {
        let rec = record();
        let mut buf = Vec::new();
        emit_csv(std::slice::from_ref(&rec), &mut buf).unwrap();
        assert!(!buf.contains(&b'\r'));
        let mut reader = csv::Reader::from_reader(buf.as_slice());
        let row = reader.records().next().unwrap().unwrap();
        assert_eq!(&row[0], "ddr");
        assert_eq!(row[1].parse::<f64>().unwrap(), rec.snr_db);
        assert_eq!(row[2].parse::<u64>().unwrap(), rec.frames);
        assert_eq!(row[3].parse::<u64>().unwrap(), rec.bits);
        assert_eq!(row[4].parse::<u64>().unwrap(), rec.bit_errors);
        assert_eq!(row[5].parse::<f64>().unwrap(), 7.0 / 6144.0);
        assert_eq!(row[6].parse::<f64>().unwrap(), 12.345678901234567);
    }

    #[test]
    fn missing_sinr_is_empty_field() {
        let rec = BerRecord { receiver: Receiver::Tr, mean_sinr_db: None, ..record() };
        let mut buf = Vec::new();
        emit_csv(&[rec], &mut buf).unwrap();
        assert!(String::from_utf8(buf).unwrap().lines().nth(1).unwrap().ends_with(','));
    }

    #[test]
    fn unwritable_destination_fails() {
        let dir = tempfile::tempdir().unwrap();
        assert!(write_csv(&[record()], &dir.path().join("missing").join("out.csv")).is_err());
    }
}
