//! Plain-text Hodge numbers: the dimension n, then n+1 rows h^{p,0} .. h^{p,n},
//! then the Betti row b_0 .. b_{2n}. Blank lines and `#` comments are ignored.

use ddbar_core::diamond::{BettiVector, HodgeDiamond, HodgeNumbers};

use crate::manifest::ParseError;

pub fn parse_diamond(text: &str) -> Result<HodgeNumbers, ParseError> {
    let mut rows: Vec<(usize, Vec<(usize, &str)>)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("");
        let mut words = Vec::new();
        let mut col = 1;
        for chunk in body.split_inclusive(char::is_whitespace) {
            let word = chunk.trim_end();
            if !word.is_empty() {
                words.push((col, word));
            }
            col += chunk.chars().count();
        }
        if !words.is_empty() {
            rows.push((idx + 1, words));
        }
    }
    let last_line = text.lines().count().max(1);
    let number = |line: usize, (col, word): (usize, &str), what: &str| {
        word.parse::<u64>().map_err(|_| ParseError::SyntaxError {
            line,
            col,
            expected: what.to_string(),
            found: format!("'{word}'"),
        })
    };
    let mut rows = rows.into_iter();
    let Some((line, header)) = rows.next() else {
        return Err(ParseError::SyntaxError {
            line: last_line,
            col: 1,
            expected: "the dimension n".to_string(),
            found: "end of input".to_string(),
        });
    };
    if header.len() != 1 {
        let (col, word) = header[1];
        return Err(ParseError::SyntaxError {
            line,
            col,
            expected: "end of line".to_string(),
            found: format!("'{word}'"),
        });
    }
    let n = number(line, header[0], "the dimension n")? as usize;
    if n > 64 {
        return Err(ParseError::SyntaxError {
            line,
            col: header[0].0,
            expected: "a dimension of at most 64".to_string(),
            found: format!("'{n}'"),
        });
    }
    let mut read_row = |len: usize, what: &str| -> Result<Vec<u64>, ParseError> {
        let Some((line, words)) = rows.next() else {
            return Err(ParseError::SyntaxError {
                line: last_line,
                col: 1,
                expected: what.to_string(),
                found: "end of input".to_string(),
            });
        };
        if words.len() != len {
            let col = words.get(len).map_or_else(
                || words.last().map_or(1, |(c, w)| c + w.chars().count()),
                |(c, _)| *c,
            );
            return Err(ParseError::SyntaxError {
                line,
                col,
                expected: format!("{len} entries in {what}"),
                found: format!("{} entries", words.len()),
            });
        }
        words
            .into_iter()
            .map(|w| number(line, w, "a non-negative integer"))
            .collect()
    };
    let mut h = Vec::with_capacity(n + 1);
    for p in 0..=n {
        h.push(read_row(n + 1, &format!("row p = {p}"))?);
    }
    let b = read_row(2 * n + 1, "the Betti row")?;
    if let Some((line, words)) = rows.next() {
        return Err(ParseError::SyntaxError {
            line,
            col: words[0].0,
            expected: "end of input".to_string(),
            found: format!("'{}'", words[0].1),
        });
    }
    let diamond = HodgeDiamond::new(n, h).expect("row lengths checked");
    let betti = BettiVector::new(n, b).expect("row length checked");
    Ok(HodgeNumbers::new(diamond, betti).expect("dimensions agree"))
}

pub fn render_diamond(x: &HodgeNumbers) -> String {
    let join = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(" ");
    let mut out = format!("{}\n", x.n());
    for row in x.diamond.rows() {
        out.push_str(&join(row));
        out.push('\n');
    }
    out.push_str(&join(x.betti.values()));
    out.push('\n');
    out
}
