//! Per-configuration resource rows and their CSV form.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::adder::{build_adder, AdderConfig, AdderError, Structure};
use crate::analysis::{formula_check, metrics, ConformanceReport, FormulaKind, Metrics};
use crate::ladder::LadderImpl;

/// Column order of the CSV report.
pub const CSV_COLUMNS: [&str; 20] = [
    "row",
    "structure",
    "ladder",
    "provenance",
    "n",
    "gates",
    "x",
    "cnot",
    "toffoli",
    "mcx",
    "toffoli_depth",
    "cnot_depth",
    "mcx_layers",
    "total_depth",
    "wires",
    "ancillas",
    "control_endpoints",
    "checks",
    "failed_checks",
    "reference",
];

/// Published asymptotics (Toffoli count; Toffoli depth; ancillas) for a grid cell.
pub fn reference_row(structure: Structure, ladder: LadderImpl) -> &'static str {
    match (structure, ladder) {
        (Structure::Original, LadderImpl::Linear) => "4n-2; 3n-1; n",
        (Structure::Original, LadderImpl::Polylog) => "O(n log n); O(log^2 n); n-1",
        (Structure::Original, LadderImpl::CarryLog) => "10n-Theta(log n); 4 log n+Theta(1); 2n-Theta(log n)",
        (Structure::Optimized, LadderImpl::Linear) => "2n-1; 2n-1; 0",
        (Structure::Optimized, LadderImpl::Polylog) => "O(n log n); O(log^2 n); 0",
        (Structure::Optimized, LadderImpl::CarryLog) => "8n-Theta(log n); 4 log n+Theta(1); n-Theta(log n)",
    }
}

/// Adders listed for comparison only; they are not built here.
pub const LITERATURE_ROWS: [(&str, &str); 2] = [
    ("[CDKM04]", "2n-1; 2n-1; 1"),
    ("[Mog19]", "12n+Theta(log n); 10 log n+Theta(1); n-1"),
];

#[derive(Debug, Clone, Serialize)]
pub struct ReportRow {
    pub config: String,
    pub structure: Structure,
    pub ladder: LadderImpl,
    pub provenance: &'static str,
    pub n: usize,
    pub metrics: Metrics,
    pub conformance: ConformanceReport,
}

impl ReportRow {
    pub fn build(config: AdderConfig) -> Result<ReportRow, AdderError> {
        let adder = build_adder(config)?;
        let m = metrics(&adder.circuit);
        let conformance = formula_check(FormulaKind::for_adder(config.structure, config.ladder), config.n, &m);
        Ok(ReportRow {
            config: config.descriptor(),
            structure: config.structure,
            ladder: config.ladder,
            provenance: config.provenance(),
            n: config.n,
            metrics: m,
            conformance,
        })
    }

    fn csv_record(&self) -> Vec<String> {
        let m = &self.metrics;
        let failed: Vec<&str> = self.conformance.checks.iter().filter(|c| !c.pass).map(|c| c.name).collect();
        let mut rec = vec![
            "measured".to_string(),
            self.structure.as_str().to_string(),
            self.ladder.as_str().to_string(),
            self.provenance.to_string(),
        ];
        rec.extend(
            [
                self.n,
                m.gates,
                m.x,
                m.cnot,
                m.toffoli,
                m.mcx,
                m.toffoli_depth,
                m.cnot_depth,
                m.mcx_layers,
                m.total_depth,
                m.wires,
                m.ancillas,
                m.control_endpoints,
            ]
            .map(|v| v.to_string()),
        );
        rec.push(if failed.is_empty() { "pass" } else { "fail" }.to_string());
        rec.push(failed.join(";"));
        rec.push(reference_row(self.structure, self.ladder).to_string());
        rec
    }
}

/// One row per configuration per width, widths ascending, configurations in
/// grid order.
pub fn build_rows(lo: usize, hi: usize) -> Result<Vec<ReportRow>, AdderError> {
    let configs: Vec<AdderConfig> = (lo..=hi).flat_map(AdderConfig::all).collect();
    configs.into_par_iter().map(ReportRow::build).collect()
}

/// Header, measured rows, then the literature-only reference lines.
pub fn write_csv<W: Write>(out: W, rows: &[ReportRow]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_COLUMNS)?;
    for row in rows {
        w.write_record(row.csv_record())?;
    }
    for (source, reference) in LITERATURE_ROWS {
        let mut rec = vec![String::new(); CSV_COLUMNS.len()];
        rec[0] = "literature".into();
        rec[3] = source.into();
        rec[CSV_COLUMNS.len() - 1] = reference.into();
        w.write_record(rec)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse_csv(bytes: &[u8]) -> Vec<csv::StringRecord> {
        csv::ReaderBuilder::new()
            .has_headers(true)
            .from_reader(bytes)
            .records()
            .map(Result::unwrap)
            .collect()
    }

    fn col(name: &str) -> usize {
        CSV_COLUMNS.iter().position(|c| *c == name).unwrap()
    }

    #[test]
    fn rows_for_eight() {
        let rows = build_rows(8, 8).unwrap();
        assert_eq!(rows.len(), 6);
        let thm = rows.iter().find(|r| r.config == "optimized/carrylog").unwrap();
        assert_eq!((thm.metrics.toffoli, thm.metrics.ancillas), (39, 4));
        assert!(thm.metrics.toffoli_depth <= 14);
        let ttk = rows.iter().find(|r| r.config == "optimized/linear").unwrap();
        assert_eq!((ttk.metrics.toffoli, ttk.metrics.toffoli_depth, ttk.metrics.ancillas), (15, 15, 0));
        assert!(rows.iter().all(|r| r.conformance.passed()));
    }

    #[test]
    fn csv_cardinality_and_integer_cells() {
        let rows = build_rows(2, 4).unwrap();
        let mut buf = Vec::new();
        write_csv(&mut buf, &rows).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with(&CSV_COLUMNS.join(",")));
        let recs = parse_csv(&buf);
        assert_eq!(recs.len(), 18 + LITERATURE_ROWS.len());
        let measured: Vec<_> = recs.iter().filter(|r| &r[0] == "measured").collect();
        assert_eq!(measured.len(), 18);
        for r in &measured {
            for c in col("n")..=col("control_endpoints") {
                assert!(r[c].parse::<u64>().is_ok(), "cell {c} = {}", &r[c]);
            }
            assert_eq!(&r[col("checks")], "pass");
        }
        assert_eq!(recs.iter().filter(|r| &r[0] == "literature").count(), 2);
    }
}
