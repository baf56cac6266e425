use std::collections::BTreeMap;

/// Plain-text second-quadrant grid: rows `q` descending with the `q` label on
/// the right, columns `p` ascending with the `p` labels underneath.
pub fn render_e_table(page: &BTreeMap<(i32, i32), usize>) -> String {
    let pmin = page.keys().map(|k| k.0).min().unwrap_or(0).min(0);
    let pmax = page.keys().map(|k| k.0).max().unwrap_or(0).max(0);
    let qmax = page.keys().map(|k| k.1).max().unwrap_or(0).max(0);
    let qmin = page.keys().map(|k| k.1).min().unwrap_or(0).min(0);
    let ps: Vec<i32> = (pmin..=pmax).collect();
    let width = ps
        .iter()
        .map(|p| p.to_string().len())
        .chain(page.values().map(|d| d.to_string().len()))
        .max()
        .unwrap_or(1);
    let mut out = String::new();
    if !page.is_empty() {
        for q in (qmin..=qmax).rev() {
            let cells: Vec<String> =
                ps.iter().map(|p| format!("{:>width$}", page.get(&(*p, q)).copied().unwrap_or(0))).collect();
            out.push_str(&format!("{} | {q}\n", cells.join("  ")));
        }
    }
    let row_len = ps.len() * width + 2 * (ps.len() - 1);
    out.push_str(&format!("{}-+\n", "-".repeat(row_len)));
    let labels: Vec<String> = ps.iter().map(|p| format!("{p:>width$}")).collect();
    out.push_str(&format!("{}   p\\q\n", labels.join("  ")));
    out
}
