use std::path::Path;

use super::{ParseError, WorldError};

const HEADER: [&str; 8] = ["qid", "x_s", "y_s", "θ_s", "v_s", "x_g", "y_g", "r_g"];

/// One start/goal pair. Heading and speed are blank for domains without them.
#[derive(Debug, Clone, PartialEq)]
pub struct QueryRecord {
    pub qid: u32,
    pub x_s: f64,
    pub y_s: f64,
    pub theta_s: Option<f64>,
    pub v_s: Option<f64>,
    pub x_g: f64,
    pub y_g: f64,
    pub r_g: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct QuerySet {
    pub records: Vec<QueryRecord>,
    pub seed: u64,
    /// Generator that produced the set, e.g. `sb`.
    pub tag: String,
}

impl QuerySet {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
        w.write_record(HEADER).expect("writing to memory");
        let opt = |v: Option<f64>| v.map(|v| v.to_string()).unwrap_or_default();
        for r in &self.records {
            w.write_record([
                r.qid.to_string(),
                r.x_s.to_string(),
                r.y_s.to_string(),
                opt(r.theta_s),
                opt(r.v_s),
                r.x_g.to_string(),
                r.y_g.to_string(),
                r.r_g.to_string(),
            ])
            .expect("writing to memory");
        }
        let body = String::from_utf8(w.into_inner().expect("flushing to memory")).expect("utf-8 csv");
        format!("# seed={} tag={}\n{body}", self.seed, self.tag)
    }

    pub fn from_csv(text: &str) -> Result<Self, ParseError> {
        let mut set = QuerySet::default();
        let mut body_start = 0;
        if let Some(rest) = text.strip_prefix('#') {
            let end = rest.find('\n').map_or(text.len(), |i| i + 2);
            for field in text[1..end].split_whitespace() {
                if let Some(seed) = field.strip_prefix("seed=") {
                    set.seed = seed
                        .parse()
                        .map_err(|_| ParseError::new(0, format!("invalid seed `{seed}`")))?;
                } else if let Some(tag) = field.strip_prefix("tag=") {
                    set.tag = tag.to_string();
                }
            }
            body_start = end;
        }
        let mut reader = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .from_reader(text[body_start..].as_bytes());
        let header = reader
            .headers()
            .map_err(|e| ParseError::new(body_start, e.to_string()))?
            .clone();
        if header.iter().ne(HEADER) {
            return Err(ParseError::new(
                body_start,
                format!("expected header `{}`", HEADER.join(",")),
            ));
        }
        for row in reader.records() {
            let row = row.map_err(|e| {
                let offset = e.position().map_or(0, |p| p.byte() as usize);
                ParseError::new(body_start + offset, e.to_string())
            })?;
            let offset = body_start + row.position().map_or(0, |p| p.byte() as usize);
            let num = |i: usize| -> Result<f64, ParseError> {
                let v: f64 = row[i].trim().parse().map_err(|_| {
                    ParseError::new(offset, format!("column {} is not a number: `{}`", HEADER[i], &row[i]))
                })?;
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(ParseError::new(offset, format!("column {} is not finite", HEADER[i])))
                }
            };
            let opt = |i: usize| -> Result<Option<f64>, ParseError> {
                if row[i].trim().is_empty() {
                    Ok(None)
                } else {
                    num(i).map(Some)
                }
            };
            let qid = row[0]
                .trim()
                .parse()
                .map_err(|_| ParseError::new(offset, format!("invalid query id `{}`", &row[0])))?;
            let record = QueryRecord {
                qid,
                x_s: num(1)?,
                y_s: num(2)?,
                theta_s: opt(3)?,
                v_s: opt(4)?,
                x_g: num(5)?,
                y_g: num(6)?,
                r_g: num(7)?,
            };
            if record.r_g <= 0.0 {
                return Err(ParseError::new(offset, "goal radius must be positive"));
            }
            set.records.push(record);
        }
        Ok(set)
    }

    pub fn load(path: &Path) -> Result<Self, WorldError> {
        let text = std::fs::read_to_string(path).map_err(|e| WorldError::io(path, e))?;
        Self::from_csv(&text).map_err(|e| WorldError::parse(path, e))
    }

    pub fn save(&self, path: &Path) -> Result<(), WorldError> {
        std::fs::write(path, self.to_csv()).map_err(|e| WorldError::io(path, e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> QuerySet {
        QuerySet {
            seed: 7,
            tag: "sb".into(),
            records: vec![
                QueryRecord {
                    qid: 0,
                    x_s: 1.25,
                    y_s: 18.0,
                    theta_s: None,
                    v_s: None,
                    x_g: 18.5,
                    y_g: 1.5,
                    r_g: 1.0,
                },
                QueryRecord {
                    qid: 1,
                    x_s: 0.1 + 0.2,
                    y_s: 2.0,
                    theta_s: Some(-1.5),
                    v_s: Some(2.0),
                    x_g: 3.0,
                    y_g: 4.0,
                    r_g: 0.5,
                },
            ],
        }
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let text = sample().to_csv();
        assert!(text.starts_with("# seed=7 tag=sb\nqid,x_s,y_s,θ_s,v_s,x_g,y_g,r_g\n0,1.25,18,,,"));
        let back = QuerySet::from_csv(&text).unwrap();
        assert_eq!(back, sample());
        assert_eq!(back.to_csv(), text);
    }

    #[test]
    fn rejects_bad_rows() {
        let text = "qid,x_s,y_s,θ_s,v_s,x_g,y_g,r_g\n0,a,1,,,2,2,1\n";
        let err = QuerySet::from_csv(text).unwrap_err();
        assert_eq!(err.offset, text.find("0,a").unwrap());
        assert!(QuerySet::from_csv("qid,x\n").is_err());
        assert!(QuerySet::from_csv("qid,x_s,y_s,θ_s,v_s,x_g,y_g,r_g\n0,1,1,,,2,2,0\n").is_err());
    }
}
