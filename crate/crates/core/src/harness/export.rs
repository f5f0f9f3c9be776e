use std::fmt::Write as _;
use std::path::Path;

use super::{Format, HarnessError, ScalingRow, ScalingTable, TrialReport};

pub const TRIAL_CSV_HEADER: &str = "trial_index,estimate,abs_error,max_depth,total_queries";
pub const SCALING_CSV_HEADER: &str = "epsilon,beta,max_depth,total_queries,depth_query_product,error";

/// Renders a trial report. Trial reports have no SVG form.
pub fn render_report(report: &TrialReport, format: Format) -> Result<String, HarnessError> {
    match format {
        Format::Csv => {
            let mut out = String::from(TRIAL_CSV_HEADER);
            out.push('\n');
            for t in &report.trials {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    t.trial_index, t.estimate, t.abs_error, t.max_depth, t.total_queries
                );
            }
            Ok(out)
        }
        Format::Json => Ok(json(report)),
        Format::Svg => Err(HarnessError::Config(
            "svg output is only available for scaling tables".into(),
        )),
    }
}

pub fn render_scaling(table: &ScalingTable, format: Format) -> String {
    match format {
        Format::Csv => {
            let mut out = String::from(SCALING_CSV_HEADER);
            out.push('\n');
            for r in &table.rows {
                let err = r.error.as_deref().unwrap_or("").replace([',', '\n'], ";");
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    r.epsilon, r.beta, r.max_depth, r.total_queries, r.depth_query_product, err
                );
            }
            out
        }
        Format::Json => json(table),
        Format::Svg => svg(table),
    }
}

fn json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

fn write(path: &Path, contents: &str) -> Result<(), HarnessError> {
    std::fs::write(path, contents).map_err(|source| HarnessError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn write_report(report: &TrialReport, format: Format, path: &Path) -> Result<(), HarnessError> {
    write(path, &render_report(report, format)?)
}

pub fn write_scaling(table: &ScalingTable, format: Format, path: &Path) -> Result<(), HarnessError> {
    write(path, &render_scaling(table, format))
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 60.0;
const COLOURS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

fn log_metrics(r: &ScalingRow) -> [f64; 3] {
    [
        (r.max_depth as f64).log10(),
        (r.total_queries as f64).log10(),
        r.depth_query_product.log10(),
    ]
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Log-log scatter of depth (circles), queries (squares) and their product
/// (triangles) against epsilon, one colour per beta, with fitted lines.
fn svg(table: &ScalingTable) -> String {
    let ok: Vec<_> = table
        .rows
        .iter()
        .filter(|r| r.error.is_none() && r.max_depth > 0)
        .collect();
    let xs: Vec<f64> = ok.iter().map(|r| r.epsilon.log10()).collect();
    let ys: Vec<f64> = ok
        .iter()
        .flat_map(|r| [r.max_depth as f64, r.total_queries as f64, r.depth_query_product])
        .map(f64::log10)
        .collect();
    let range = |v: &[f64]| {
        let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if lo.is_finite() && hi > lo {
            (lo, hi)
        } else if lo.is_finite() {
            (lo - 1.0, lo + 1.0)
        } else {
            (0.0, 1.0)
        }
    };
    let (x0, x1) = range(&xs);
    let (y0, y1) = range(&ys);
    let px = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let py = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(out, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<line x1="{MARGIN}" y1="{b}" x2="{r}" y2="{b}" stroke="black"/><line x1="{MARGIN}" y1="{MARGIN}" x2="{MARGIN}" y2="{b}" stroke="black"/>"#,
        b = HEIGHT - MARGIN,
        r = WIDTH - MARGIN
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle" font-size="12">log10 epsilon [{x0:.3}, {x1:.3}]</text>"#,
        WIDTH / 2.0,
        HEIGHT - 20.0
    );
    let _ = writeln!(
        out,
        r#"<text x="15" y="{}" font-size="12" transform="rotate(-90 15 {})" text-anchor="middle">log10 D, N, DN [{y0:.3}, {y1:.3}]</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0
    );
    let mut betas: Vec<f64> = ok.iter().map(|r| r.beta).collect();
    betas.dedup();
    for (bi, beta) in betas.iter().enumerate() {
        let colour = COLOURS[bi % COLOURS.len()];
        for r in ok.iter().filter(|r| r.beta == *beta) {
            let x = px(r.epsilon.log10());
            let (d, n, dn) = (
                py((r.max_depth as f64).log10()),
                py((r.total_queries as f64).log10()),
                py(r.depth_query_product.log10()),
            );
            let _ = writeln!(out, r#"<circle cx="{x:.2}" cy="{d:.2}" r="3" fill="{colour}"/>"#);
            let _ = writeln!(
                out,
                r#"<rect x="{:.2}" y="{:.2}" width="6" height="6" fill="{colour}"/>"#,
                x - 3.0,
                n - 3.0
            );
            let _ = writeln!(
                out,
                r#"<polygon points="{:.2},{:.2} {:.2},{:.2} {:.2},{:.2}" fill="{colour}"/>"#,
                x,
                dn - 4.0,
                x - 4.0,
                dn + 3.0,
                x + 4.0,
                dn + 3.0
            );
        }
        if let Some(fit) = table.fits.iter().find(|f| f.beta == *beta) {
            let pts: Vec<_> = ok.iter().filter(|r| r.beta == *beta).collect();
            let lx: Vec<f64> = pts.iter().map(|r| r.epsilon.log10()).collect();
            let mx = lx.iter().sum::<f64>() / lx.len() as f64;
            let slopes = [fit.slope_depth, fit.slope_queries, fit.slope_product];
            for (j, slope) in slopes.iter().enumerate() {
                let my = pts.iter().map(|r| log_metrics(r)[j]).sum::<f64>() / pts.len() as f64;
                let y = |x: f64| my + slope * (x - mx);
                let _ = writeln!(
                    out,
                    r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{colour}" stroke-width="1"/>"#,
                    px(x0),
                    py(y(x0)),
                    px(x1),
                    py(y(x1))
                );
            }
        }
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" font-size="11" fill="{colour}">{}</text>"#,
            WIDTH - MARGIN + 5.0,
            MARGIN + 14.0 * bi as f64,
            escape(&format!("beta={beta}"))
        );
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::{Algorithm, ExperimentConfig};
    use crate::types::TargetSpec;

    fn empty_report() -> TrialReport {
        let c = ExperimentConfig::new(Algorithm::Type1, 0.3, TargetSpec::new(0.1, 0.1, 0.5).unwrap());
        TrialReport::from_records(&c, vec![])
    }

    #[test]
    fn empty_csv_is_header_only() {
        assert_eq!(
            render_report(&empty_report(), Format::Csv).unwrap(),
            format!("{TRIAL_CSV_HEADER}\n")
        );
    }

    #[test]
    fn run_reports_have_no_svg() {
        assert!(render_report(&empty_report(), Format::Svg).is_err());
    }
}
