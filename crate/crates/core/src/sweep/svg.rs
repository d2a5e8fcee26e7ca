//! Deterministic SVG pictures of the surviving squares of one level.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::Result;
use crate::graph::{Neighborhood, SquareId, GRID_HI, GRID_LO};

const SIZE: f64 = 800.0;
const MARGIN: f64 = 40.0;

fn px(t: f64) -> f64 {
    MARGIN + t * (SIZE - 2.0 * MARGIN)
}

fn py(t: f64) -> f64 {
    SIZE - px(t)
}

/// Unit-square axes, the grid domain, the squares, the neighborhood outline
/// at parameter `a` and a marker at the fixed point `(1 - 1/a, 1 - 1/a)`.
pub fn snapshot_svg(squares: &[SquareId], nbhd: Option<&Neighborhood>, a: f64) -> String {
    let mut s = String::new();
    let w = |s: &mut String, args: std::fmt::Arguments| s.write_fmt(args).expect("writing to a String");
    w(&mut s, format_args!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIZE}\" height=\"{SIZE}\" viewBox=\"0 0 {SIZE} {SIZE}\">\n"
    ));
    w(&mut s, format_args!("<rect width=\"{SIZE}\" height=\"{SIZE}\" fill=\"white\"/>\n"));
    w(&mut s, format_args!(
        "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"none\" stroke=\"black\"/>\n",
        px(0.0), py(1.0), px(1.0) - px(0.0), py(0.0) - py(1.0)
    ));
    for i in 0..=4 {
        let t = i as f64 / 4.0;
        w(&mut s, format_args!(
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\" text-anchor=\"middle\">{t}</text>\n",
            px(t), py(0.0) + 16.0
        ));
        w(&mut s, format_args!(
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\" text-anchor=\"end\">{t}</text>\n",
            px(0.0) - 4.0, py(t) + 4.0
        ));
    }
    w(&mut s, format_args!(
        "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"none\" stroke=\"gray\" stroke-dasharray=\"4 4\"/>\n",
        px(GRID_LO), py(GRID_HI), px(GRID_HI) - px(GRID_LO), py(GRID_LO) - py(GRID_HI)
    ));

    let mut sorted = squares.to_vec();
    sorted.sort_unstable();
    w(&mut s, format_args!("<g fill=\"steelblue\" stroke=\"none\">\n"));
    for sq in &sorted {
        let b = sq.geometry();
        w(&mut s, format_args!(
            "<rect x=\"{:.3}\" y=\"{:.3}\" width=\"{:.3}\" height=\"{:.3}\"/>\n",
            px(b.x.lo()), py(b.y.hi()), px(b.x.hi()) - px(b.x.lo()), py(b.y.lo()) - py(b.y.hi())
        ));
    }
    w(&mut s, format_args!("</g>\n"));

    match nbhd {
        Some(Neighborhood::Rect(r)) => {
            if let Some(b) = r.rect() {
                w(&mut s, format_args!(
                    "<rect x=\"{:.3}\" y=\"{:.3}\" width=\"{:.3}\" height=\"{:.3}\" fill=\"none\" stroke=\"crimson\"/>\n",
                    px(b.x.lo()), py(b.y.hi()), px(b.x.hi()) - px(b.x.lo()), py(b.y.lo()) - py(b.y.hi())
                ));
            }
        }
        Some(Neighborhood::Ellipse(e)) => {
            let pts: Vec<String> = e
                .outline(a, 128)
                .iter()
                .map(|&(x, y)| format!("{:.3},{:.3}", px(x), py(y)))
                .collect();
            w(&mut s, format_args!(
                "<polygon points=\"{}\" fill=\"none\" stroke=\"crimson\"/>\n",
                pts.join(" ")
            ));
        }
        None => {}
    }
    let fp = 1.0 - 1.0 / a;
    w(&mut s, format_args!(
        "<circle cx=\"{:.3}\" cy=\"{:.3}\" r=\"3\" fill=\"crimson\"/>\n",
        px(fp), py(fp)
    ));
    s.push_str("</svg>\n");
    s
}

pub fn render_snapshot(squares: &[SquareId], nbhd: Option<&Neighborhood>, a: f64, path: &Path) -> Result<()> {
    std::fs::write(path, snapshot_svg(squares, nbhd, a))?;
    Ok(())
}
