/// Discrete Fréchet distance between two polylines in the plane: the
/// smallest leash length over monotone couplings of their vertex sequences.
/// The distance between the curves modulo parameterization is at most this
/// value and at least it minus the longest segment.
///
/// Returns `None` if either curve is empty.
pub fn dcmp(p: &[(f64, f64)], q: &[(f64, f64)]) -> Option<f64> {
    if p.is_empty() || q.is_empty() {
        return None;
    }
    let d = |a: (f64, f64), b: (f64, f64)| (a.0 - b.0).hypot(a.1 - b.1);
    // Row by row over p, keeping one row of the table.
    let mut row = vec![0.0f64; q.len()];
    for (i, &a) in p.iter().enumerate() {
        let mut prev_diag = 0.0f64;
        for (j, &b) in q.iter().enumerate() {
            let here = d(a, b);
            let up = row[j];
            row[j] = match (i, j) {
                (0, 0) => here,
                (0, _) => row[j - 1].max(here),
                (_, 0) => up.max(here),
                _ => prev_diag.min(up).min(row[j - 1]).max(here),
            };
            prev_diag = up;
        }
    }
    Some(row[q.len() - 1])
}
