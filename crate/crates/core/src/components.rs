//! Connected components of a boolean cell mask under orthogonal adjacency
//! (4-neighbors in 2D, 2p-neighbors in p dimensions).

use crate::grid::strides;

/// Labels are 0 for cells outside the mask and 1..=count otherwise,
/// numbered in order of first appearance in a row-major scan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Components {
    pub count: usize,
    pub labels: Vec<u32>,
}

impl Components {
    /// Number of cells in each component, indexed by `label - 1`.
    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.count];
        for &l in &self.labels {
            if l > 0 {
                sizes[l as usize - 1] += 1;
            }
        }
        sizes
    }
}

pub fn connected_components(mask: &[bool], shape: &[usize]) -> Components {
    assert_eq!(
        mask.len(),
        shape.iter().product::<usize>(),
        "mask length does not match grid shape"
    );
    let strides = strides(shape);
    let mut labels = vec![0u32; mask.len()];
    let mut count = 0usize;
    let mut stack = Vec::new();
    for start in 0..mask.len() {
        if !mask[start] || labels[start] != 0 {
            continue;
        }
        count += 1;
        let label = count as u32;
        labels[start] = label;
        stack.push(start);
        while let Some(cell) = stack.pop() {
            for (j, &stride) in strides.iter().enumerate() {
                let coord = (cell / stride) % shape[j];
                if coord > 0 {
                    visit(cell - stride, mask, &mut labels, label, &mut stack);
                }
                if coord + 1 < shape[j] {
                    visit(cell + stride, mask, &mut labels, label, &mut stack);
                }
            }
        }
    }
    Components { count, labels }
}

fn visit(n: usize, mask: &[bool], labels: &mut [u32], label: u32, stack: &mut Vec<usize>) {
    if mask[n] && labels[n] == 0 {
        labels[n] = label;
        stack.push(n);
    }
}

/// Masked cells with at least one orthogonal neighbor outside the mask or
/// outside the grid, as flat indices in row-major order.
pub fn boundary_cells(mask: &[bool], shape: &[usize]) -> Vec<usize> {
    let strides = strides(shape);
    (0..mask.len())
        .filter(|&cell| {
            mask[cell]
                && strides.iter().enumerate().any(|(j, &stride)| {
                    let coord = (cell / stride) % shape[j];
                    coord == 0
                        || coord + 1 == shape[j]
                        || !mask[cell - stride]
                        || !mask[cell + stride]
                })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(rows: &[&str]) -> (Vec<bool>, Vec<usize>) {
        let shape = vec![rows.len(), rows[0].len()];
        let mask = rows
            .iter()
            .flat_map(|r| r.chars().map(|c| c == '#'))
            .collect();
        (mask, shape)
    }

    #[test]
    fn empty_mask() {
        let c = connected_components(&[false; 12], &[3, 4]);
        assert_eq!(c.count, 0);
        assert!(c.labels.iter().all(|&l| l == 0));
    }

    #[test]
    fn diagonal_cells_are_separate() {
        let (mask, shape) = parse(&["#..", ".#.", "..#"]);
        assert_eq!(connected_components(&mask, &shape).count, 3);
    }

    #[test]
    fn ring_and_island() {
        let (mask, shape) = parse(&["#####..", "#...#..", "#.#.#.#", "#...#..", "#####.."]);
        let c = connected_components(&mask, &shape);
        assert_eq!(c.count, 3);
        assert_eq!(c.sizes(), vec![16, 1, 1]);
        assert_eq!(c.labels[0], 1);
    }

    #[test]
    fn wraparound_is_not_adjacency() {
        // last cell of row 0 and first of row 1 are consecutive in memory only
        let (mask, shape) = parse(&["..#", "#.."]);
        assert_eq!(connected_components(&mask, &shape).count, 2);
    }

    #[test]
    fn three_dimensional_adjacency() {
        let shape = [2, 2, 2];
        let mut mask = [false; 8];
        mask[0] = true; // (0,0,0)
        mask[7] = true; // (1,1,1)
        assert_eq!(connected_components(&mask, &shape).count, 2);
        mask[1] = true; // (0,0,1)
        mask[3] = true; // (0,1,1)
        assert_eq!(connected_components(&mask, &shape).count, 1);
    }

    #[test]
    fn boundary_of_block() {
        let (mask, shape) = parse(&[".....", ".###.", ".###.", ".###.", "....."]);
        let b = boundary_cells(&mask, &shape);
        assert_eq!(b.len(), 8);
        assert!(!b.contains(&12));
    }
}
