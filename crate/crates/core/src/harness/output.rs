//! CSV rows, the JSON envelope and a minimal SVG line plot.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

fn io(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Writes `rows` with a header row and returns the column names.
pub fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<Vec<String>> {
    let csv_err = |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| csv_err(e.into_error().into()))?;
    let columns = match bytes.iter().position(|&b| b == b'\n') {
        Some(end) => csv::Reader::from_reader(&bytes[..=end])
            .headers()
            .map_err(csv_err)?
            .iter()
            .map(str::to_owned)
            .collect(),
        None => Vec::new(),
    };
    std::fs::write(path, &bytes).map_err(io(path))?;
    Ok(columns)
}

/// Self-describing metadata written next to a CSV file.
#[derive(Debug, Clone, Serialize)]
pub struct Envelope<'a, C: Serialize, M: Serialize> {
    pub schema_version: u32,
    pub config: &'a C,
    pub columns: Vec<String>,
    pub rows_file: String,
    pub metadata: M,
}

pub fn write_envelope<C: Serialize, M: Serialize>(
    path: &Path,
    config: &C,
    columns: Vec<String>,
    rows_file: &Path,
    metadata: M,
) -> Result<()> {
    let env = Envelope {
        schema_version: SCHEMA_VERSION,
        config,
        columns,
        rows_file: rows_file.file_name().map_or_else(
            || rows_file.display().to_string(),
            |n| n.to_string_lossy().into_owned(),
        ),
        metadata,
    };
    let mut text = serde_json::to_string_pretty(&env)?;
    text.push('\n');
    std::fs::write(path, text).map_err(io(path))
}

struct Series {
    label: String,
    color: String,
    points: Vec<(f64, f64)>,
}

/// Line plot rendered straight to SVG markup.
pub struct SvgPlot {
    title: String,
    x_label: String,
    y_label: String,
    series: Vec<Series>,
}

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 440.0;
const MARGIN: f64 = 60.0;

impl SvgPlot {
    pub fn new(title: &str, x_label: &str, y_label: &str) -> Self {
        Self {
            title: title.into(),
            x_label: x_label.into(),
            y_label: y_label.into(),
            series: Vec::new(),
        }
    }

    pub fn series(mut self, label: &str, color: &str, points: Vec<(f64, f64)>) -> Self {
        self.series.push(Series {
            label: label.into(),
            color: color.into(),
            points: points
                .into_iter()
                .filter(|(x, y)| x.is_finite() && y.is_finite())
                .collect(),
        });
        self
    }

    fn bounds(&self) -> (f64, f64, f64, f64) {
        let all = self.series.iter().flat_map(|s| s.points.iter());
        let (mut x0, mut x1, mut y0, mut y1) = (
            f64::INFINITY,
            f64::NEG_INFINITY,
            f64::INFINITY,
            f64::NEG_INFINITY,
        );
        for &(x, y) in all {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
        if !(x1 > x0) {
            x0 -= 0.5;
            x1 += 0.5;
        }
        if !(y1 > y0) {
            y0 -= 0.5;
            y1 += 0.5;
        }
        (x0, x1, y0, y1)
    }

    pub fn render(&self) -> String {
        let (x0, x1, y0, y1) = self.bounds();
        let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
        let sy = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);
        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
        let _ = writeln!(
            s,
            r#"<rect x="{MARGIN}" y="{MARGIN}" width="{}" height="{}" fill="none" stroke="black"/>"#,
            WIDTH - 2.0 * MARGIN,
            HEIGHT - 2.0 * MARGIN
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="30" text-anchor="middle" font-size="14">{}</text>"#,
            WIDTH / 2.0,
            escape(&self.title)
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
            WIDTH / 2.0,
            HEIGHT - 15.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            s,
            r#"<text x="15" y="{}" text-anchor="middle" transform="rotate(-90 15 {})">{}</text>"#,
            HEIGHT / 2.0,
            HEIGHT / 2.0,
            escape(&self.y_label)
        );
        for i in 0..=4 {
            let f = i as f64 / 4.0;
            let (xv, yv) = (x0 + f * (x1 - x0), y0 + f * (y1 - y0));
            let _ = writeln!(
                s,
                r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
                sx(xv),
                HEIGHT - MARGIN + 16.0,
                tick(xv)
            );
            let _ = writeln!(
                s,
                r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#,
                MARGIN - 6.0,
                sy(yv) + 4.0,
                tick(yv)
            );
        }
        for (k, series) in self.series.iter().enumerate() {
            let pts: Vec<String> = series
                .points
                .iter()
                .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
                .collect();
            let _ = writeln!(
                s,
                r#"<polyline fill="none" stroke="{}" stroke-width="1.5" points="{}"/>"#,
                escape(&series.color),
                pts.join(" ")
            );
            let ly = MARGIN + 16.0 + 16.0 * k as f64;
            let _ = writeln!(
                s,
                r#"<line x1="{}" y1="{ly}" x2="{}" y2="{ly}" stroke="{}" stroke-width="2"/><text x="{}" y="{}">{}</text>"#,
                WIDTH - MARGIN - 150.0,
                WIDTH - MARGIN - 130.0,
                escape(&series.color),
                WIDTH - MARGIN - 125.0,
                ly + 4.0,
                escape(&series.label)
            );
        }
        s.push_str("</svg>\n");
        s
    }

    pub fn write(&self, path: &Path) -> Result<PathBuf> {
        std::fs::write(path, self.render()).map_err(io(path))?;
        Ok(path.to_path_buf())
    }
}

fn tick(v: f64) -> String {
    if v != 0.0 && (v.abs() < 1e-2 || v.abs() >= 1e4) {
        format!("{v:.2e}")
    } else {
        format!("{v:.3}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct Row {
        phase_rad: f64,
        port: &'static str,
        seed: Option<u64>,
    }

    #[test]
    fn csv_has_header_and_plain_decimals() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("rows.csv");
        let rows = [
            Row {
                phase_rad: -0.5,
                port: "B",
                seed: None,
            },
            Row {
                phase_rad: 1e-7,
                port: "A,B",
                seed: Some(3),
            },
        ];
        let cols = write_csv(&p, &rows).unwrap();
        assert_eq!(cols, ["phase_rad", "port", "seed"]);
        let text = std::fs::read_to_string(&p).unwrap();
        assert_eq!(text, "phase_rad,port,seed\n-0.5,B,\n1e-7,\"A,B\",3\n");
    }

    #[test]
    fn envelope_shape() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("rows.json");
        write_envelope(
            &p,
            &serde_json::json!({"n_bar": 100}),
            vec!["a".into()],
            &dir.path().join("rows.csv"),
            (),
        )
        .unwrap();
        let v: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap();
        assert_eq!(v["schema_version"], 1);
        assert_eq!(v["config"]["n_bar"], 100);
        assert_eq!(v["columns"][0], "a");
        assert_eq!(v["rows_file"], "rows.csv");
    }

    #[test]
    fn io_errors_carry_the_path() {
        let e = write_csv::<Row>(Path::new("/nonexistent/dir/x.csv"), &[]).unwrap_err();
        assert!(e.to_string().contains("/nonexistent/dir/x.csv"), "{e}");
    }

    #[test]
    fn svg_is_well_formed_enough() {
        let svg = SvgPlot::new("t<1>", "x", "y")
            .series("quantum", "crimson", vec![(0.0, 1.0), (1.0, 0.0)])
            .series(
                "flat",
                "black",
                vec![(0.0, 0.5), (1.0, 0.5), (f64::NAN, 1.0)],
            )
            .render();
        assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains("t&lt;1&gt;"));
    }
}
