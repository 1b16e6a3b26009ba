use clap::ValueEnum;
use serde::Serialize;

use octograv::action::{CouplingConstants, CrosscheckSummary, LagrangianForm, LagrangianReport, RotationResponse};
use octograv::frame::DerivativeProvider;
use octograv::scenarios::Scenario;
use octograv::tables::{StructureTables, TableEntry, TableName};
use octograv::verify::SuiteReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

fn print_json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("plain data serializes"));
}

fn join(point: &[f64]) -> String {
    point.iter().map(|v| format!("{v}")).collect::<Vec<_>>().join(";")
}

pub fn print_verify(report: &SuiteReport, format: Format) {
    if format == Format::Json {
        print_json(report);
        return;
    }
    println!("seed {} samples {}", report.seed, report.samples);
    for r in &report.results {
        println!(
            "{} {:<44} checked {:>6}  max residual {:.3e}  tolerance {:.0e}",
            if r.passed { "PASS" } else { "FAIL" },
            r.name,
            r.checked,
            r.max_residual,
            r.tolerance
        );
    }
    let failed = report.failures().count();
    println!("{} passed, {failed} failed", report.results.len() - failed);
}

#[derive(Serialize)]
pub struct TableDump {
    pub table: TableName,
    pub rank: usize,
    pub labels: [usize; 2],
    pub entries: Vec<TableEntry>,
}

pub fn print_tables(tables: &StructureTables, names: &[TableName], format: Format) {
    let dumps: Vec<TableDump> = names
        .iter()
        .map(|&name| {
            let t = tables.table(name);
            TableDump {
                table: name,
                rank: t.rank(),
                labels: [*t.labels().start(), *t.labels().end()],
                entries: t.nonzero_entries(),
            }
        })
        .collect();
    if format == Format::Json {
        if dumps.len() == 1 {
            print_json(&dumps[0]);
        } else {
            print_json(&dumps);
        }
        return;
    }
    for d in &dumps {
        println!("# {} rank {} labels {}..={} nonzero {}", d.table.as_str(), d.rank, d.labels[0], d.labels[1], d.entries.len());
        for e in &d.entries {
            let idx: Vec<String> = e.indices.iter().map(usize::to_string).collect();
            println!("{} {} {}", idx.join(" "), e.re, e.im);
        }
    }
}

#[derive(Serialize)]
pub struct Row {
    pub index: usize,
    #[serde(flatten)]
    pub report: LagrangianReport,
}

#[derive(Serialize)]
struct LagrangianRun<'a> {
    scenario: &'a Scenario,
    form: LagrangianForm,
    provider: DerivativeProvider,
    kappa: f64,
    seed: u64,
    results: &'a [Row],
}

pub fn print_lagrangian(
    scenario: &Scenario,
    form: LagrangianForm,
    provider: DerivativeProvider,
    constants: &CouplingConstants,
    seed: u64,
    rows: &[Row],
    format: Format,
) -> Result<(), String> {
    match format {
        Format::Json => print_json(&LagrangianRun {
            scenario,
            form,
            provider,
            kappa: constants.kappa,
            seed,
            results: rows,
        }),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(std::io::stdout());
            w.write_record([
                "index",
                "point",
                "value_re",
                "value_im",
                "oracle",
                "abs_delta",
                "rel_delta",
                "imag_magnitude",
                "orientation",
                "scale",
            ])
            .map_err(|e| e.to_string())?;
            for row in rows {
                let r = &row.report;
                w.write_record([
                    row.index.to_string(),
                    join(&r.point),
                    r.value.re.to_string(),
                    r.value.im.to_string(),
                    r.oracle.to_string(),
                    r.abs_delta.to_string(),
                    r.rel_delta.to_string(),
                    r.imag_magnitude.to_string(),
                    r.orientation.to_string(),
                    r.scale.to_string(),
                ])
                .map_err(|e| e.to_string())?;
            }
            w.flush().map_err(|e| e.to_string())?;
        }
        Format::Text => {
            println!(
                "# {} form {form} provider {provider} kappa {} seed {seed}",
                scenario.name(),
                constants.kappa
            );
            println!(
                "{:>5}  {:>22}  {:>10}  {:>22}  {:>9}  {:>3}  point",
                "index", "value.re", "value.im", "oracle", "rel", "ori"
            );
            for row in rows {
                let r = &row.report;
                println!(
                    "{:>5}  {:>22.15e}  {:>10.2e}  {:>22.15e}  {:>9.2e}  {:>3}  {}",
                    row.index,
                    r.value.re,
                    r.value.im,
                    r.oracle,
                    r.rel_delta,
                    r.orientation,
                    join(&r.point)
                );
            }
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct FourDimRun<'a> {
    scenario: &'a Scenario,
    #[serde(flatten)]
    summary: &'a CrosscheckSummary,
}

pub fn print_crosscheck_4d(scenario: &Scenario, summary: &CrosscheckSummary, format: Format) {
    if format == Format::Json {
        print_json(&FourDimRun { scenario, summary });
        return;
    }
    println!("# {} crosscheck dd4 / vierbein4 / eh4", scenario.name());
    for p in &summary.points {
        println!(
            "{:>5}  dd4 {:>22.15e}  vierbein4 {:>22.15e}  eh4 {:>22.15e}  rel {:.2e}",
            p.index, p.double_dual, p.vierbein, p.standard_eh, p.max_rel_delta
        );
    }
    for (i, why) in &summary.skipped {
        println!("{i:>5}  skipped: {why}");
    }
    println!(
        "{}: max rel delta {:.3e} (tolerance {:.0e}){}",
        if summary.passed && summary.skipped.is_empty() { "PASS" } else { "FAIL" },
        summary.max_rel_delta,
        summary.tolerance,
        summary.worst_index.map(|i| format!(" at point {i}")).unwrap_or_default()
    );
}

#[derive(Serialize)]
pub struct EightDimSummary {
    pub scenario: Scenario,
    pub tolerance: f64,
    /// Coordinate-index versus frame-index evaluation, relative.
    pub max_route_delta: f64,
    /// max |Im| / max(|Re|, scale).
    pub max_imag_ratio: f64,
    /// Relative change under a fixed frame boost; measured only.
    pub max_rotation_change: f64,
    pub passed: bool,
    pub points: Vec<LagrangianReport>,
    pub rotation: Vec<RotationResponse>,
}

impl EightDimSummary {
    pub fn new(scenario: Scenario, tolerance: f64, points: Vec<LagrangianReport>, rotation: Vec<RotationResponse>) -> Self {
        let max_route_delta = points.iter().map(|r| r.rel_delta).fold(0.0, f64::max);
        let max_imag_ratio = points.iter().map(|r| r.imag_ratio).fold(0.0, f64::max);
        let max_rotation_change = rotation.iter().map(|r| r.relative_change).fold(0.0, f64::max);
        Self {
            scenario,
            tolerance,
            max_route_delta,
            max_imag_ratio,
            max_rotation_change,
            passed: max_route_delta <= tolerance && max_imag_ratio <= tolerance,
            points,
            rotation,
        }
    }
}

pub fn print_crosscheck_8d(summary: &EightDimSummary, format: Format) {
    if format == Format::Json {
        print_json(summary);
        return;
    }
    println!("# {} crosscheck chi8 (coordinate vs frame indices, reality)", summary.scenario.name());
    for (i, (p, rot)) in summary.points.iter().zip(&summary.rotation).enumerate() {
        println!(
            "{i:>5}  re {:>22.15e}  im {:>10.2e}  route {:.2e}  boost change {:.2e}",
            p.value.re, p.value.im, p.rel_delta, rot.relative_change
        );
    }
    println!(
        "{}: route {:.3e}, imaginary ratio {:.3e} (tolerance {:.0e}); boost response {:.3e} (not asserted)",
        if summary.passed { "PASS" } else { "FAIL" },
        summary.max_route_delta,
        summary.max_imag_ratio,
        summary.tolerance,
        summary.max_rotation_change
    );
}
