use std::collections::HashMap;

use super::group::FuchsianGroup;
use crate::error::{Error, Result};
use crate::minkowski::{cone_level, lorentz_dot, MinkVector};

/// Side of the deduplication cells. Distinct orbit points of the octagon
/// group are at least the injectivity diameter apart in the hyperbolic
/// metric, hence far more than this in the ambient coordinates.
const CELL: f64 = 0.05;

/// Points `w·p` for all words `w` of length at most `word_len`, starting with
/// `p` itself, in breadth-first order. Coincident products are merged.
pub fn orbit(group: &FuchsianGroup, p: MinkVector, word_len: usize) -> Result<Vec<MinkVector>> {
    match cone_level(p) {
        Some(level) if (level - 1.0).abs() <= 1e-9 => {}
        _ => return Err(Error::DegenerateInput(format!("base point {p:?} is not on the unit hyperboloid"))),
    }
    let letters = group.alphabet();
    let key = |q: MinkVector| [(q.x / CELL).floor() as i64, (q.y / CELL).floor() as i64, (q.z / CELL).floor() as i64];
    // one point per cell: orbit points are much farther apart than a cell
    let mut cells: HashMap<[i64; 3], u32> = HashMap::new();
    let mut points = vec![p];
    cells.insert(key(p), 0);
    let mut frontier = 0..1;
    for _ in 0..word_len {
        let start = points.len();
        for k in frontier.clone() {
            let q = points[k];
            for g in &letters {
                let image = g.apply(q);
                let c = key(image);
                let mut seen = false;
                'search: for dx in -1..=1 {
                    for dy in -1..=1 {
                        for dz in -1..=1 {
                            if let Some(&i) = cells.get(&[c[0] + dx, c[1] + dy, c[2] + dz]) {
                                if (points[i as usize] - image).euclid_norm() < CELL {
                                    seen = true;
                                    break 'search;
                                }
                            }
                        }
                    }
                }
                if !seen {
                    cells.insert(c, points.len() as u32);
                    points.push(image);
                }
            }
        }
        frontier = start..points.len();
    }
    Ok(points)
}

/// Hyperbolic distance between two points of the unit hyperboloid.
pub fn hyperboloid_distance(a: MinkVector, b: MinkVector) -> f64 {
    (-lorentz_dot(a, b)).max(1.0).acosh()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rigidity::group::make_genus2_group;

    #[test]
    fn orbit_sizes_and_levels() {
        let g = make_genus2_group().unwrap();
        assert_eq!(orbit(&g, MinkVector::APEX, 0).unwrap(), vec![MinkVector::APEX]);
        let sizes: Vec<usize> = (1..=4).map(|l| orbit(&g, MinkVector::APEX, l).unwrap().len()).collect();
        // free group counts 9, 65, 457, 3201; the relator identifies words from length four on
        assert_eq!(sizes[..3], [9, 65, 457]);
        assert!(sizes[3] < 3201 && sizes[3] > sizes[2]);
        // far points lose digits in z² − x² − y² itself; the hull only uses the near ones
        for q in orbit(&g, MinkVector::APEX, 4).unwrap() {
            if hyperboloid_distance(MinkVector::APEX, q) <= crate::rigidity::DEFAULT_RADIUS {
                assert!((cone_level(q).unwrap() - 1.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn base_point_must_be_on_the_hyperboloid() {
        let g = make_genus2_group().unwrap();
        assert!(orbit(&g, MinkVector::new(0.0, 0.0, 2.0), 1).is_err());
    }

    #[test]
    fn neighbours_sit_at_the_translation_length() {
        let g = make_genus2_group().unwrap();
        let pts = orbit(&g, MinkVector::APEX, 1).unwrap();
        for q in &pts[1..] {
            assert!((hyperboloid_distance(MinkVector::APEX, *q) - g.boost_length).abs() < 1e-9);
        }
    }
}
