//! Line-oriented instance files.
//!
//! ```text
//! ais <n> 0
//!
//! coloring <n> <colors>
//! partitions <k> <size_1> .. <size_k>
//! edges <e>
//! <u> <v>                      e lines, 0-based vertices, u < v
//!
//! concert <n> <halls>
//! partitions <k> <size_1> .. <size_k>
//! apps <n>
//! <start> <end> <offer>        n lines, end exclusive
//! ```
//!
//! Integers are decimal, fields separated by single spaces, every line ends
//! with a newline. Blank lines and lines starting with `#` are skipped when
//! reading.

use std::fmt::{self, Write as _};
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bench::coloring::{self, ColoringInstance};
use crate::bench::concert::{self, Application, ConcertInstance};
use crate::error::{Error, Result};
use crate::symmetry::Partitions;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, clap::ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Ais,
    Coloring,
    Concert,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Ais => "ais",
            Family::Coloring => "coloring",
            Family::Concert => "concert",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Instance {
    Ais { n: usize },
    Coloring(ColoringInstance),
    Concert(ConcertInstance),
}

/// Generator parameters: `n`, hall count (concert only) and the largest block.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenParams {
    pub family: Family,
    pub n: usize,
    pub halls: usize,
    pub max_part: usize,
    pub seed: u64,
}

impl GenParams {
    pub fn generate(&self) -> Result<Instance> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        match self.family {
            Family::Ais => {
                if self.n < 2 {
                    return Err(Error::Config("series length must be at least 2".into()));
                }
                Ok(Instance::Ais { n: self.n })
            }
            Family::Coloring => Ok(Instance::Coloring(coloring::generate(self.n, self.max_part, &mut rng)?)),
            Family::Concert => Ok(Instance::Concert(concert::generate(self.n, self.halls, self.max_part, &mut rng)?)),
        }
    }
}

impl Instance {
    pub fn family(&self) -> Family {
        match self {
            Instance::Ais { .. } => Family::Ais,
            Instance::Coloring(_) => Family::Coloring,
            Instance::Concert(_) => Family::Concert,
        }
    }

    pub fn num_vars(&self) -> usize {
        match self {
            Instance::Ais { n } => *n,
            Instance::Coloring(c) => c.n,
            Instance::Concert(c) => c.n(),
        }
    }

    pub fn read(path: &Path) -> Result<Self> {
        std::fs::read_to_string(path)?.parse()
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        Ok(std::fs::write(path, self.to_string())?)
    }
}

fn partitions_line(out: &mut String, p: &Partitions) {
    let sizes = p.sizes();
    let _ = write!(out, "partitions {}", sizes.len());
    for s in sizes {
        let _ = write!(out, " {s}");
    }
    out.push('\n');
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        match self {
            Instance::Ais { n } => {
                let _ = writeln!(out, "ais {n} 0");
            }
            Instance::Coloring(c) => {
                let _ = writeln!(out, "coloring {} {}", c.n, c.colors);
                partitions_line(&mut out, &c.var_parts);
                let _ = writeln!(out, "edges {}", c.edges.len());
                for (u, v) in &c.edges {
                    let _ = writeln!(out, "{u} {v}");
                }
            }
            Instance::Concert(c) => {
                let _ = writeln!(out, "concert {} {}", c.n(), c.halls);
                partitions_line(&mut out, &c.var_parts);
                let _ = writeln!(out, "apps {}", c.n());
                for a in &c.apps {
                    let _ = writeln!(out, "{} {} {}", a.start, a.end, a.offer);
                }
            }
        }
        f.write_str(&out)
    }
}

struct Lines<'a> {
    it: Box<dyn Iterator<Item = (usize, &'a str)> + 'a>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(s: &'a str) -> Self {
        let it = s
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        Lines { it: Box::new(it), last: 0 }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::InstanceParse { line: self.last, msg: msg.into() }
    }

    /// Next line as integers, with an optional leading keyword.
    fn next(&mut self, keyword: Option<&str>) -> Result<Vec<i64>> {
        let Some((no, line)) = self.it.next() else {
            return Err(Error::InstanceParse { line: self.last + 1, msg: "unexpected end of file".into() });
        };
        self.last = no;
        let mut fields = line.split_whitespace();
        if let Some(k) = keyword {
            match fields.next() {
                Some(w) if w == k => {}
                other => return Err(self.err(format!("expected `{k}`, found `{}`", other.unwrap_or("")))),
            }
        }
        fields.map(|w| w.parse::<i64>().map_err(|_| self.err(format!("`{w}` is not an integer")))).collect()
    }

    fn exact(&mut self, keyword: Option<&str>, len: usize) -> Result<Vec<i64>> {
        let v = self.next(keyword)?;
        if v.len() != len {
            return Err(self.err(format!("expected {len} numbers, found {}", v.len())));
        }
        Ok(v)
    }

    fn count(&self, v: i64) -> Result<usize> {
        usize::try_from(v).map_err(|_| self.err(format!("{v} is negative")))
    }

    fn partitions(&mut self, n: usize) -> Result<Partitions> {
        let v = self.next(Some("partitions"))?;
        let k = v.first().copied().ok_or_else(|| self.err("missing partition count"))?;
        if v.len() != self.count(k)? + 1 {
            return Err(self.err(format!("expected {k} partition sizes, found {}", v.len() - 1)));
        }
        let sizes = v[1..].iter().map(|&s| self.count(s)).collect::<Result<Vec<_>>>()?;
        if sizes.contains(&0) || sizes.iter().sum::<usize>() != n {
            return Err(self.err(format!("partition sizes must be positive and sum to {n}")));
        }
        Partitions::from_sizes(&sizes).map_err(|e| self.err(e.to_string()))
    }
}

impl std::str::FromStr for Instance {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = Lines::new(s);
        let Some((no, head)) = lines.it.next() else {
            return Err(Error::InstanceParse { line: 1, msg: "empty instance".into() });
        };
        lines.last = no;
        let mut fields = head.split_whitespace();
        let kind = fields.next().unwrap_or("");
        let nums = fields
            .map(|w| w.parse::<i64>().map_err(|_| lines.err(format!("`{w}` is not an integer"))))
            .collect::<Result<Vec<_>>>()?;
        if nums.len() != 2 {
            return Err(lines.err("header must be `kind n m`"));
        }
        let n = lines.count(nums[0])?;
        let m = lines.count(nums[1])?;
        let inst = match kind {
            "ais" => {
                if n < 2 {
                    return Err(lines.err("series length must be at least 2"));
                }
                Instance::Ais { n }
            }
            "coloring" => {
                let var_parts = lines.partitions(n)?;
                let e = lines.exact(Some("edges"), 1)?[0];
                let e = lines.count(e)?;
                let mut edges = Vec::with_capacity(e);
                for _ in 0..e {
                    let uv = lines.exact(None, 2)?;
                    let (u, v) = (lines.count(uv[0])?, lines.count(uv[1])?);
                    if u >= v || v >= n {
                        return Err(lines.err(format!("edge {u} {v} needs u < v < {n}")));
                    }
                    edges.push((u, v));
                }
                let c = ColoringInstance { n, colors: m, var_parts, edges };
                c.validate().map_err(|e| lines.err(e.to_string()))?;
                Instance::Coloring(c)
            }
            "concert" => {
                let var_parts = lines.partitions(n)?;
                let k = lines.exact(Some("apps"), 1)?[0];
                let k = lines.count(k)?;
                if k != n {
                    return Err(lines.err(format!("expected {n} applications, found {k}")));
                }
                let mut apps = Vec::with_capacity(n);
                for _ in 0..n {
                    let t = lines.exact(None, 3)?;
                    let small = |x: i64| i32::try_from(x).map_err(|_| lines.err(format!("{x} is out of range")));
                    apps.push(Application { start: small(t[0])?, end: small(t[1])?, offer: small(t[2])? });
                }
                let c = ConcertInstance { halls: m, var_parts, apps };
                c.validate().map_err(|e| lines.err(e.to_string()))?;
                Instance::Concert(c)
            }
            other => return Err(lines.err(format!("unknown instance kind `{other}`"))),
        };
        if let Some((no, _)) = lines.it.next() {
            return Err(Error::InstanceParse { line: no, msg: "trailing content".into() });
        }
        Ok(inst)
    }
}
