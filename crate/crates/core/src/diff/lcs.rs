// SPDX-License-Identifier: Apache-2.0

/// Longest common subsequence of `a` and `b` under `eq`, as index pairs in
/// increasing order. When several subsequences are equally long, the one
/// that keeps later elements of `b` is chosen.
pub fn lcs<T, U>(a: &[T], b: &[U], mut eq: impl FnMut(&T, &U) -> bool) -> Vec<(usize, usize)> {
    let (n, m) = (a.len(), b.len());
    let mut dp = vec![0u32; (n + 1) * (m + 1)];
    let idx = |i: usize, j: usize| i * (m + 1) + j;
    let mut same = vec![false; n * m];
    for i in 1..=n {
        for j in 1..=m {
            let e = eq(&a[i - 1], &b[j - 1]);
            same[(i - 1) * m + (j - 1)] = e;
            dp[idx(i, j)] = if e {
                dp[idx(i - 1, j - 1)] + 1
            } else {
                dp[idx(i - 1, j)].max(dp[idx(i, j - 1)])
            };
        }
    }
    let mut out = Vec::with_capacity(dp[idx(n, m)] as usize);
    let (mut i, mut j) = (n, m);
    while i > 0 && j > 0 {
        if same[(i - 1) * m + (j - 1)] {
            out.push((i - 1, j - 1));
            i -= 1;
            j -= 1;
        } else if dp[idx(i, j - 1)] >= dp[idx(i - 1, j)] {
            j -= 1;
        } else {
            i -= 1;
        }
    }
    out.reverse();
    out
}
