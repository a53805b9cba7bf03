//! Text format for degree-2 cocycles:
//!
//! ```text
//! # comment
//! cocycle <name> <level>
//! <coefficient> <a>,<b>,<c>,<d> <unit as a:exp pairs>
//! end
//! ```
//!
//! Each term line stands for `coefficient · {u1(a,b,c,d)}_2 ⊗ unit`.

use std::collections::BTreeMap;

use num_rational::BigRational;

use crate::error::GoncharovError;
use crate::units::UnitVector;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocycleTerm {
    pub coeff: BigRational,
    pub quad: [i64; 4],
    pub g: UnitVector,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedCocycle {
    pub name: String,
    pub level: u32,
    pub terms: Vec<CocycleTerm>,
}

#[derive(Clone, Debug, Default)]
pub struct CocycleFile {
    pub cocycles: BTreeMap<String, NamedCocycle>,
}

impl CocycleFile {
    pub fn parse(text: &str) -> Result<Self, GoncharovError> {
        let mut out = CocycleFile::default();
        let mut current: Option<NamedCocycle> = None;
        for (n, raw) in text.lines().enumerate() {
            let line = n + 1;
            let err = |msg: &str| GoncharovError::CocycleData {
                line,
                msg: msg.to_string(),
            };
            let s = raw.split('#').next().unwrap_or("").trim();
            if s.is_empty() {
                continue;
            }
            if let Some(rest) = s.strip_prefix("cocycle ") {
                if current.is_some() {
                    return Err(err("nested cocycle block"));
                }
                let mut it = rest.split_whitespace();
                let name = it.next().ok_or_else(|| err("missing name"))?;
                let level: u32 = it
                    .next()
                    .and_then(|x| x.parse().ok())
                    .ok_or_else(|| err("missing level"))?;
                current = Some(NamedCocycle {
                    name: name.to_string(),
                    level,
                    terms: Vec::new(),
                });
                continue;
            }
            if s == "end" {
                let c = current.take().ok_or_else(|| err("`end` outside a block"))?;
                out.cocycles.insert(c.name.clone(), c);
                continue;
            }
            let c = current
                .as_mut()
                .ok_or_else(|| err("term outside a block"))?;
            let mut it = s.splitn(3, char::is_whitespace);
            let coeff: BigRational = it
                .next()
                .and_then(|x| x.parse().ok())
                .ok_or_else(|| err("bad coefficient"))?;
            let quad: Vec<i64> = it
                .next()
                .ok_or_else(|| err("missing parameters"))?
                .split(',')
                .map(|x| x.trim().parse::<i64>())
                .collect::<Result<_, _>>()
                .map_err(|_| err("bad parameters"))?;
            let quad: [i64; 4] = quad.try_into().map_err(|_| err("need four parameters"))?;
            let g = UnitVector::parse(c.level, it.next().unwrap_or("").trim())
                .map_err(|e| err(&e.to_string()))?;
            c.terms.push(CocycleTerm { coeff, quad, g });
        }
        if current.is_some() {
            return Err(GoncharovError::CocycleData {
                line: text.lines().count(),
                msg: "unterminated cocycle block".into(),
            });
        }
        Ok(out)
    }

    pub fn get(&self, name: &str) -> Result<&NamedCocycle, GoncharovError> {
        self.cocycles
            .get(name)
            .ok_or_else(|| GoncharovError::MissingCocycle(name.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
# sample
cocycle s 15
1 1,2,3,7 4:1 7:1 1:-1 2:-1
-1/2 2,4,6,1 2:1
end
";

    #[test]
    fn parses_blocks() {
        let f = CocycleFile::parse(SAMPLE).unwrap();
        let c = f.get("s").unwrap();
        assert_eq!(c.level, 15);
        assert_eq!(c.terms.len(), 2);
        assert_eq!(c.terms[1].quad, [2, 4, 6, 1]);
        assert_eq!(c.terms[1].coeff, BigRational::new((-1).into(), 2.into()));
    }

    #[test]
    fn missing_name_is_reported() {
        let f = CocycleFile::parse(SAMPLE).unwrap();
        assert!(matches!(
            f.get("xi1(1,4)"),
            Err(GoncharovError::MissingCocycle(_))
        ));
    }

    #[test]
    fn malformed_lines() {
        assert!(matches!(
            CocycleFile::parse("cocycle a 15\n1 1,2,3 1:1\nend\n"),
            Err(GoncharovError::CocycleData { line: 2, .. })
        ));
        assert!(CocycleFile::parse("cocycle a 15\n").is_err());
    }
}
