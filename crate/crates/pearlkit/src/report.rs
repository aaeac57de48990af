//! Deterministic command output: aligned tables for people, `key=value`
//! records for scripts.

use std::fmt::Write as _;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Text,
    Records,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub title: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(title: &str, columns: &[&str]) -> Self {
        Table { title: title.into(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn row<I, S>(&mut self, cells: I)
    where
        I: IntoIterator<Item = S>,
        S: ToString,
    {
        let row: Vec<String> = cells.into_iter().map(|c| c.to_string()).collect();
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Block {
    Facts(Vec<(String, String)>),
    Table(Table),
    /// Verbatim text, shown only in text mode.
    Document(String),
    /// Verbatim text in every mode.
    Raw(String),
    /// Shown only in records mode.
    RecordsOnly(Vec<Block>),
}

/// Output of one command plus whether a verification failed.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    blocks: Vec<Block>,
    pub failed: bool,
}

pub fn flag(b: bool) -> &'static str {
    if b {
        "1"
    } else {
        "0"
    }
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    /// Appends `key = value` facts; consecutive calls share one block.
    pub fn fact(&mut self, key: &str, value: impl ToString) {
        if let Some(Block::Facts(f)) = self.blocks.last_mut() {
            f.push((key.into(), value.to_string()));
        } else {
            self.blocks.push(Block::Facts(vec![(key.into(), value.to_string())]));
        }
    }

    pub fn table(&mut self, t: Table) {
        self.blocks.push(Block::Table(t));
    }

    pub fn document(&mut self, text: String) {
        self.blocks.push(Block::Document(text));
    }

    pub fn raw(&mut self, text: String) {
        self.blocks.push(Block::Raw(text));
    }

    /// Adds the blocks of `inner` to records output only.
    pub fn records_only(&mut self, inner: Report) {
        self.failed |= inner.failed;
        self.blocks.push(Block::RecordsOnly(inner.blocks));
    }

    /// Records a failed check; the command then exits with status 1.
    pub fn require(&mut self, ok: bool) {
        self.failed |= !ok;
    }

    /// Value of the first fact with this key.
    pub fn get(&self, key: &str) -> Option<&str> {
        find_fact(&self.blocks, key)
    }

    pub fn tables(&self) -> impl Iterator<Item = &Table> {
        self.blocks.iter().filter_map(|b| match b {
            Block::Table(t) => Some(t),
            _ => None,
        })
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Text => self.render_text(),
            OutputFormat::Records => self.render_records(),
        }
    }

    fn render_text(&self) -> String {
        let mut out = String::new();
        let shown = self.blocks.iter().filter(|b| !matches!(b, Block::RecordsOnly(_)));
        for (k, b) in shown.enumerate() {
            if k > 0 && !matches!(b, Block::Document(_) | Block::Raw(_)) {
                out.push('\n');
            }
            match b {
                Block::Facts(f) => {
                    let w = f.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
                    for (k, v) in f {
                        writeln!(out, "{k:<w$}  {v}").unwrap();
                    }
                }
                Block::Table(t) => {
                    writeln!(out, "{}", t.title).unwrap();
                    let widths: Vec<usize> = (0..t.columns.len())
                        .map(|c| t.rows.iter().map(|r| r[c].len()).chain([t.columns[c].len()]).max().unwrap_or(0))
                        .collect();
                    let line = |cells: &[String]| {
                        let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect();
                        padded.join("  ").trim_end().to_string()
                    };
                    writeln!(out, "{}", line(&t.columns)).unwrap();
                    for r in &t.rows {
                        writeln!(out, "{}", line(r)).unwrap();
                    }
                }
                Block::Document(s) | Block::Raw(s) => out.push_str(s),
                Block::RecordsOnly(_) => {}
            }
        }
        out
    }

    fn render_records(&self) -> String {
        let mut out = String::new();
        records(&self.blocks, &mut out);
        out
    }
}

fn find_fact<'a>(blocks: &'a [Block], key: &str) -> Option<&'a str> {
    blocks.iter().find_map(|b| match b {
        Block::Facts(f) => f.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str()),
        Block::RecordsOnly(inner) => find_fact(inner, key),
        _ => None,
    })
}

fn records(blocks: &[Block], out: &mut String) {
    for b in blocks {
        match b {
            Block::Facts(f) => {
                for (k, v) in f {
                    writeln!(out, "{k}={}", quote(v)).unwrap();
                }
            }
            Block::Table(t) => {
                for r in &t.rows {
                    let pairs: Vec<String> =
                        t.columns.iter().zip(r).map(|(c, v)| format!("{c}={}", quote(v))).collect();
                    writeln!(out, "{}", pairs.join(" ")).unwrap();
                }
            }
            Block::Document(_) => {}
            Block::Raw(s) => out.push_str(s),
            Block::RecordsOnly(inner) => records(inner, out),
        }
    }
}

/// Values with spaces, quotes or `=` are written as quoted strings.
fn quote(v: &str) -> String {
    if v.is_empty() || v.chars().any(|c| c.is_whitespace() || c == '"' || c == '=') {
        format!("{v:?}")
    } else {
        v.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_and_records() {
        let mut r = Report::new();
        r.fact("alpha", 1);
        r.fact("gamma_sum", 0);
        let mut t = Table::new("homology", &["degree", "dim"]);
        t.row([-1, 2]);
        t.row([10, 0]);
        r.table(t);
        assert_eq!(
            r.render(OutputFormat::Text),
            "alpha      1\ngamma_sum  0\n\nhomology\ndegree  dim\n    -1    2\n    10    0\n"
        );
        assert_eq!(r.render(OutputFormat::Records), "alpha=1\ngamma_sum=0\ndegree=-1 dim=2\ndegree=10 dim=0\n");
        assert_eq!(r.get("gamma_sum"), Some("0"));
    }

    #[test]
    fn quoting() {
        let mut r = Report::new();
        r.fact("check", "a * b = m");
        r.document("ignored in records\n".into());
        assert_eq!(r.render(OutputFormat::Records), "check=\"a * b = m\"\n");
    }
}
