/// Minimum-cost perfect matching on a square cost matrix (row-major,
/// `size × size`). Returns `col_for_row`.
///
/// Shortest augmenting paths with row and column potentials, O(size³).
pub(crate) fn min_cost_assignment(cost: &[i64], size: usize) -> Vec<usize> {
    assert_eq!(cost.len(), size * size);
    const INF: i64 = i64::MAX / 4;
    // 1-based arrays; index 0 is the virtual source column.
    let mut u = vec![0i64; size + 1];
    let mut v = vec![0i64; size + 1];
    let mut row_of = vec![0usize; size + 1];
    let mut way = vec![0usize; size + 1];

    for row in 1..=size {
        row_of[0] = row;
        let mut j0 = 0;
        let mut minv = vec![INF; size + 1];
        let mut used = vec![false; size + 1];
        loop {
            used[j0] = true;
            let i0 = row_of[j0];
            let mut delta = INF;
            let mut j1 = 0;
            for j in 1..=size {
                if used[j] {
                    continue;
                }
                let cur = cost[(i0 - 1) * size + (j - 1)] - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=size {
                if used[j] {
                    u[row_of[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if row_of[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            row_of[j0] = row_of[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut col_for_row = vec![0; size];
    for j in 1..=size {
        if row_of[j] > 0 {
            col_for_row[row_of[j] - 1] = j - 1;
        }
    }
    col_for_row
}
