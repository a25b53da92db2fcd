//! Marching-squares iso-lines on a rectilinear grid.

use crate::error::{invalid, Result};

pub type Point = (f64, f64);

/// Straight pieces of one iso-line, in grid scan order.
#[derive(Debug, Clone, PartialEq)]
pub struct ContourLevel {
    pub level: f64,
    pub segments: Vec<(Point, Point)>,
}

/// Iso-lines of `values` (row `i` at `ys[i]`, column `j` at `xs[j]`) at
/// each of `levels`.
///
/// Corners are classified as above (`>= level`) or below. Ambiguous saddle
/// cells are resolved with the mean of the four corners. Edge crossings are
/// linearly interpolated, so output depends only on the inputs.
pub fn marching_squares(
    xs: &[f64],
    ys: &[f64],
    values: &[Vec<f64>],
    levels: &[f64],
) -> Result<Vec<ContourLevel>> {
    if xs.len() < 2 || ys.len() < 2 {
        return invalid("contouring needs at least a 2x2 grid");
    }
    if values.len() != ys.len() || values.iter().any(|row| row.len() != xs.len()) {
        return invalid(format!(
            "value grid must be {}x{} (rows x columns)",
            ys.len(),
            xs.len()
        ));
    }
    Ok(levels
        .iter()
        .map(|&level| ContourLevel {
            level,
            segments: level_segments(xs, ys, values, level),
        })
        .collect())
}

fn level_segments(xs: &[f64], ys: &[f64], v: &[Vec<f64>], level: f64) -> Vec<(Point, Point)> {
    let mut out = Vec::new();
    for i in 0..ys.len() - 1 {
        for j in 0..xs.len() - 1 {
            // Corners counter-clockwise from bottom-left.
            let c = [v[i][j], v[i][j + 1], v[i + 1][j + 1], v[i + 1][j]];
            let p = [
                (xs[j], ys[i]),
                (xs[j + 1], ys[i]),
                (xs[j + 1], ys[i + 1]),
                (xs[j], ys[i + 1]),
            ];
            let mut case = 0u8;
            for (bit, &val) in c.iter().enumerate() {
                if val >= level {
                    case |= 1 << bit;
                }
            }
            // Crossing on edge k, which runs from corner k to corner k+1.
            let cross = |k: usize| {
                let (a, b) = (k, (k + 1) % 4);
                let t = (level - c[a]) / (c[b] - c[a]);
                (
                    p[a].0 + t * (p[b].0 - p[a].0),
                    p[a].1 + t * (p[b].1 - p[a].1),
                )
            };
            let edges: &[(usize, usize)] = match case {
                0 | 15 => &[],
                1 | 14 => &[(3, 0)],
                2 | 13 => &[(0, 1)],
                3 | 12 => &[(3, 1)],
                4 | 11 => &[(1, 2)],
                6 | 9 => &[(0, 2)],
                7 | 8 => &[(2, 3)],
                5 | 10 => {
                    let centre_above = c.iter().sum::<f64>() / 4.0 >= level;
                    // Case 5: corners 0 and 2 above. If the centre is above
                    // too they connect through the middle.
                    if (case == 5) == centre_above {
                        &[(3, 2), (0, 1)]
                    } else {
                        &[(3, 0), (1, 2)]
                    }
                }
                _ => unreachable!("four corner bits"),
            };
            for &(e1, e2) in edges {
                out.push((cross(e1), cross(e2)));
            }
        }
    }
    out
}
