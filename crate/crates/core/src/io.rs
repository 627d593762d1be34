//! Text formats for groups, actions and metrics.
//!
//! ```text
//! group <name> <order>        action <group-source> <degree>     metric <degree>
//! identity <index>            <order rows of degree indices>     <upper triangle, row by row>
//! <order rows of order indices>
//! ```
//!
//! Lines starting with `#` are comments. A `<group-source>` is `zoo:<name>`
//! or a path, resolved relative to the action file's directory.

use std::path::Path;

use crate::doubling::zoo;
use crate::error::{Error, Result};
use crate::groups::{FiniteGroup, GroupAction, Perm};
use crate::metrics::RationalMetric;
use crate::rational::{self, int, Rational};

fn content_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
}

fn parse_index(tok: &str) -> Result<usize> {
    tok.parse()
        .map_err(|_| Error::Malformed(format!("not an index: {tok:?}")))
}

fn header<'a>(line: Option<&'a str>, keyword: &str, fields: usize) -> Result<Vec<&'a str>> {
    let line = line.ok_or_else(|| Error::Malformed(format!("missing `{keyword}` header")))?;
    let toks: Vec<&str> = line.split_whitespace().collect();
    if toks.first() != Some(&keyword) || toks.len() != fields + 1 {
        return Err(Error::Malformed(format!("bad header: {line:?}")));
    }
    Ok(toks[1..].to_vec())
}

fn index_rows<'a>(lines: impl Iterator<Item = &'a str>, rows: usize, cols: usize) -> Result<Vec<Vec<usize>>> {
    let out: Vec<Vec<usize>> = lines
        .map(|l| l.split_whitespace().map(parse_index).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    if out.len() != rows || out.iter().any(|r| r.len() != cols) {
        return Err(Error::Malformed(format!("expected {rows} rows of {cols} entries")));
    }
    Ok(out)
}

/// Parses a group file, returning its name and the validated group.
pub fn parse_group_file(text: &str) -> Result<(String, FiniteGroup)> {
    let mut lines = content_lines(text);
    let h = header(lines.next(), "group", 2)?;
    let order = parse_index(h[1])?;
    let id = header(lines.next(), "identity", 1)?;
    let identity = parse_index(id[0])?;
    let table = index_rows(lines, order, order)?;
    Ok((h[0].to_string(), FiniteGroup::from_cayley(table, identity)?))
}

pub fn write_group_file(name: &str, g: &FiniteGroup) -> String {
    let mut out = format!("group {name} {}\nidentity {}\n", g.order(), g.identity());
    for row in g.table_rows() {
        out.push_str(&join(row.iter()));
        out.push('\n');
    }
    out
}

/// Resolves `zoo:<name>` or a group file path.
pub fn load_group(source: &str) -> Result<FiniteGroup> {
    match source.strip_prefix("zoo:") {
        Some(name) => Ok(zoo(name)?.group),
        None => Ok(parse_group_file(&std::fs::read_to_string(source)?)?.1),
    }
}

/// Parses an action file. `base` is the directory relative group paths
/// are resolved against.
pub fn parse_action_file(text: &str, base: &Path) -> Result<GroupAction> {
    let mut lines = content_lines(text);
    let h = header(lines.next(), "action", 2)?;
    let degree = parse_index(h[1])?;
    let group = if h[0].starts_with("zoo:") {
        load_group(h[0])?
    } else {
        load_group(&base.join(h[0]).to_string_lossy())?
    };
    let rows = index_rows(lines, group.order(), degree)?;
    let map = rows.into_iter().map(Perm::from_images).collect::<Result<Vec<_>>>()?;
    GroupAction::new(group, degree, map)
}

pub fn load_action(path: &Path) -> Result<GroupAction> {
    let text = std::fs::read_to_string(path)?;
    parse_action_file(&text, path.parent().unwrap_or(Path::new(".")))
}

pub fn write_action_file(group_source: &str, a: &GroupAction) -> String {
    let mut out = format!("action {group_source} {}\n", a.degree());
    for p in a.perms() {
        out.push_str(&join(p.images().iter()));
        out.push('\n');
    }
    out
}

pub fn parse_metric_file(text: &str) -> Result<RationalMetric> {
    let mut lines = content_lines(text);
    let h = header(lines.next(), "metric", 1)?;
    let n = parse_index(h[0])?;
    let entries: Vec<Rational> = lines
        .flat_map(str::split_whitespace)
        .map(rational::parse)
        .collect::<Result<_>>()?;
    let expected = n * n.saturating_sub(1) / 2;
    if entries.len() != expected {
        return Err(Error::Malformed(format!(
            "metric of degree {n} needs {expected} entries, found {}",
            entries.len()
        )));
    }
    let mut matrix = vec![vec![int(0); n]; n];
    let mut it = entries.into_iter();
    for x in 0..n {
        for y in x + 1..n {
            let v = it.next().unwrap();
            matrix[x][y] = v.clone();
            matrix[y][x] = v;
        }
    }
    RationalMetric::validate(matrix)
}

pub fn load_metric(path: &Path) -> Result<RationalMetric> {
    parse_metric_file(&std::fs::read_to_string(path)?)
}

pub fn write_metric_file(d: &RationalMetric) -> String {
    let n = d.degree();
    let mut out = format!("metric {n}\n");
    for x in 0..n.saturating_sub(1) {
        out.push_str(&join((x + 1..n).map(|y| rational::format(d.get(x, y)))));
        out.push('\n');
    }
    out
}

fn join<T: ToString>(items: impl Iterator<Item = T>) -> String {
    items.map(|t| t.to_string()).collect::<Vec<_>>().join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    #[test]
    fn group_round_trip() {
        let g = zoo("sym:3").unwrap().group;
        let text = write_group_file("s3", &g);
        let (name, h) = parse_group_file(&format!("# comment\n{text}")).unwrap();
        assert_eq!(name, "s3");
        assert_eq!(h, g);
    }

    #[test]
    fn group_file_errors() {
        assert!(matches!(
            parse_group_file("group bad 2\nidentity 0\n0 1\n1 1\n"),
            Err(Error::NotLatinSquare { .. })
        ));
        assert!(matches!(parse_group_file("group x 2\n0 1\n"), Err(Error::Malformed(_))));
    }

    #[test]
    fn action_relative_path() {
        let dir = std::env::temp_dir().join(format!("isoforge-io-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        std::fs::write(dir.join("z2.group"), "group z2 2\nidentity 0\n0 1\n1 0\n").unwrap();
        std::fs::write(dir.join("swap.action"), "action z2.group 2\n0 1\n1 0\n").unwrap();
        let a = load_action(&dir.join("swap.action")).unwrap();
        assert_eq!(a.degree(), 2);
        assert_eq!(a.perm(1).images(), &[1, 0]);
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn metric_round_trip() {
        let d = RationalMetric::validate(vec![
            vec![int(0), int(1), frac(11, 10)],
            vec![int(1), int(0), frac(6, 5)],
            vec![frac(11, 10), frac(6, 5), int(0)],
        ])
        .unwrap();
        let text = write_metric_file(&d);
        assert_eq!(text, "metric 3\n1 11/10\n6/5\n");
        assert_eq!(parse_metric_file(&text).unwrap(), d);
        assert!(parse_metric_file("metric 3\n1 2\n").is_err());
    }
}
