//! Minimum-cost assignment (Hungarian algorithm with potentials, O(n^3)).
//! Used as the scalable route for the permutation-sum minimum; the
//! exhaustive permutation scan cross-checks it in tests.

/// Returns the minimal total cost and one optimal row -> column assignment
/// for a square cost matrix.
pub fn min_cost_assignment(cost: &[Vec<u64>]) -> (u64, Vec<usize>) {
    let n = cost.len();
    if n == 0 {
        return (0, vec![]);
    }
    let inf = i64::MAX / 2;
    let mut u = vec![0i64; n + 1];
    let mut v = vec![0i64; n + 1];
    let mut col_row = vec![0usize; n + 1]; // 1-based row matched to each column; 0 = free
    let mut way = vec![0usize; n + 1];

    for row in 1..=n {
        col_row[0] = row;
        let mut j0 = 0usize;
        let mut minv = vec![inf; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = col_row[j0];
            let mut delta = inf;
            let mut j1 = 0usize;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost[i0 - 1][j - 1] as i64 - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[col_row[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if col_row[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            col_row[j0] = col_row[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut assignment = vec![0usize; n];
    let mut total = 0u64;
    for j in 1..=n {
        assignment[col_row[j] - 1] = j - 1;
        total += cost[col_row[j] - 1][j - 1];
    }
    (total, assignment)
}
