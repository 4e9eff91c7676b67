//! Text form of a [`SpecTree`].
//!
//! ```text
//! tree  := node | leaf
//! node  := ("and" | "or") "(" tree ("," tree)+ ")"
//! leaf  := "pareto" | field (";" field)*
//! field := ("goal" | "hard" | "pg" | "pf" | "mask") "=" "[" item ("," item)* "]"
//! ```
//!
//! `hard` and `mask` items accept `1`/`0`, `true`/`false`, `hard`/`soft`.

use super::{Hardness, LeafSpec, PriorityVectors, SpecTree};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Ident(String),
    Number(f64),
    LBracket,
    RBracket,
    LParen,
    RParen,
    Comma,
    Semi,
    Equals,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let tok = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '[' => Token::LBracket,
            ']' => Token::RBracket,
            '(' => Token::LParen,
            ')' => Token::RParen,
            ',' => Token::Comma,
            ';' => Token::Semi,
            '=' => Token::Equals,
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                out.push((start, Token::Ident(word.to_ascii_lowercase())));
                continue;
            }
            c if c.is_ascii_digit() || c == '-' || c == '+' || c == '.' => {
                let start = i;
                i += 1;
                while i < chars.len()
                    && (chars[i].is_ascii_digit()
                        || matches!(chars[i], '.' | 'e' | 'E')
                        || (matches!(chars[i], '-' | '+') && matches!(chars[i - 1], 'e' | 'E')))
                {
                    i += 1;
                }
                let lit: String = chars[start..i].iter().collect();
                let v = lit
                    .parse::<f64>()
                    .map_err(|_| err(start, &format!("bad number '{lit}'")))?;
                out.push((start, Token::Number(v)));
                continue;
            }
            other => return Err(err(i, &format!("unexpected character '{other}'"))),
        };
        out.push((i, tok));
        i += 1;
    }
    Ok(out)
}

fn err(col: usize, msg: &str) -> Error {
    Error::InvalidSpec(format!("column {}: {msg}", col + 1))
}

#[derive(Debug, Clone, PartialEq)]
enum Item {
    Number(f64),
    Word(String),
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    m: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn col(&self) -> usize {
        self.tokens
            .get(self.pos)
            .or(self.tokens.last())
            .map_or(0, |(c, _)| *c)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Token) -> Result<()> {
        let col = self.col();
        match self.next() {
            Some(t) if t == want => Ok(()),
            Some(t) => Err(err(col, &format!("expected {want:?}, found {t:?}"))),
            None => Err(err(col, &format!("expected {want:?}, found end of input"))),
        }
    }

    fn tree(&mut self) -> Result<SpecTree> {
        let is_node = matches!(
            (self.peek(), self.tokens.get(self.pos + 1).map(|(_, t)| t)),
            (Some(Token::Ident(w)), Some(Token::LParen)) if w == "and" || w == "or"
        );
        if !is_node {
            return self.leaf();
        }
        let Some(Token::Ident(word)) = self.next() else {
            unreachable!()
        };
        self.expect(Token::LParen)?;
        let mut children = vec![self.tree()?];
        while self.peek() == Some(&Token::Comma) {
            self.next();
            children.push(self.tree()?);
        }
        self.expect(Token::RParen)?;
        if children.len() < 2 {
            return Err(err(
                self.col(),
                &format!("'{word}' needs at least two children"),
            ));
        }
        Ok(if word == "and" {
            SpecTree::and(children)
        } else {
            SpecTree::or(children)
        })
    }

    fn leaf(&mut self) -> Result<SpecTree> {
        if let Some(Token::Ident(w)) = self.peek() {
            if w == "pareto" {
                self.next();
                return Ok(SpecTree::pareto(self.m));
            }
        }
        let start = self.col();
        let mut goal = None;
        let mut hard = None;
        let mut pg = None;
        let mut pf = None;
        let mut mask = None;
        loop {
            let col = self.col();
            let key = match self.next() {
                Some(Token::Ident(k)) => k,
                other => return Err(err(col, &format!("expected a field name, found {other:?}"))),
            };
            self.expect(Token::Equals)?;
            let items = self.list()?;
            if items.len() != self.m {
                return Err(err(
                    col,
                    &format!("'{key}' has {} entries, expected {}", items.len(), self.m),
                ));
            }
            let slot_taken = match key.as_str() {
                "goal" => goal.replace(numbers(&items, col)?).is_some(),
                "hard" => hard.replace(flags(&items, col)?).is_some(),
                "pg" => pg.replace(levels(&items, col)?).is_some(),
                "pf" => pf.replace(levels(&items, col)?).is_some(),
                "mask" => mask.replace(flags(&items, col)?).is_some(),
                other => return Err(err(col, &format!("unknown field '{other}'"))),
            };
            if slot_taken {
                return Err(err(col, &format!("field '{key}' given twice")));
            }
            if self.peek() == Some(&Token::Semi) {
                self.next();
            } else {
                break;
            }
        }
        let m = self.m;
        let wrap = |e: Error| err(start, &e.to_string());
        let mut leaf = match goal {
            Some(g) => LeafSpec::with_goal(g).map_err(wrap)?,
            None => LeafSpec::pareto(m),
        };
        if let Some(h) = hard {
            let h = h
                .into_iter()
                .map(|b| if b { Hardness::Hard } else { Hardness::Soft })
                .collect();
            leaf = leaf.hardness(h).map_err(wrap)?;
        }
        if pg.is_some() || pf.is_some() {
            let pv = PriorityVectors::new(pg.unwrap_or(vec![0; m]), pf.unwrap_or(vec![0; m]))
                .map_err(wrap)?;
            leaf = leaf.priorities(pv).map_err(wrap)?;
        }
        if let Some(mk) = mask {
            leaf = leaf.mask(mk).map_err(wrap)?;
        }
        leaf.validate().map_err(wrap)?;
        Ok(SpecTree::Leaf(leaf))
    }

    fn list(&mut self) -> Result<Vec<Item>> {
        self.expect(Token::LBracket)?;
        let mut items = Vec::new();
        loop {
            let col = self.col();
            match self.next() {
                Some(Token::Number(v)) => items.push(Item::Number(v)),
                Some(Token::Ident(w)) => items.push(Item::Word(w)),
                Some(Token::RBracket) if items.is_empty() => return Ok(items),
                other => return Err(err(col, &format!("expected a list item, found {other:?}"))),
            }
            let col = self.col();
            match self.next() {
                Some(Token::Comma) => continue,
                Some(Token::RBracket) => return Ok(items),
                other => return Err(err(col, &format!("expected ',' or ']', found {other:?}"))),
            }
        }
    }
}

fn numbers(items: &[Item], col: usize) -> Result<Vec<f64>> {
    items
        .iter()
        .map(|it| match it {
            Item::Number(v) => Ok(*v),
            Item::Word(w) => Err(err(col, &format!("expected a number, found '{w}'"))),
        })
        .collect()
}

fn levels(items: &[Item], col: usize) -> Result<Vec<u32>> {
    numbers(items, col)?
        .into_iter()
        .map(|v| {
            if v >= 0.0 && v.fract() == 0.0 && v <= u32::MAX as f64 {
                Ok(v as u32)
            } else {
                Err(err(
                    col,
                    &format!("priority must be a natural number, found {v}"),
                ))
            }
        })
        .collect()
}

fn flags(items: &[Item], col: usize) -> Result<Vec<bool>> {
    items
        .iter()
        .map(|it| match it {
            Item::Number(v) if *v == 1.0 => Ok(true),
            Item::Number(v) if *v == 0.0 => Ok(false),
            Item::Word(w) if w == "true" || w == "hard" => Ok(true),
            Item::Word(w) if w == "false" || w == "soft" => Ok(false),
            other => Err(err(col, &format!("expected a flag, found {other:?}"))),
        })
        .collect()
}

/// Parses a specification for `m` objectives. Blank text means plain Pareto
/// ranking.
pub fn parse_spec(text: &str, m: usize) -> Result<SpecTree> {
    let tokens = tokenize(text)?;
    if tokens.is_empty() {
        return Ok(SpecTree::pareto(m));
    }
    let mut p = Parser { tokens, pos: 0, m };
    let tree = p.tree()?;
    if p.pos < p.tokens.len() {
        return Err(err(p.col(), "trailing input"));
    }
    tree.validate(m)?;
    Ok(tree)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::preference::Connective;

    #[test]
    fn parses_single_leaf() {
        let t = parse_spec(
            "goal = [0.7, 0.4]; hard = [1, 0]; pg = [1, 2]; pf = [0, 0]",
            2,
        )
        .unwrap();
        let leaf = t.as_leaf().unwrap();
        let gs = leaf.goal.as_ref().unwrap();
        assert_eq!(gs.goal, vec![0.7, 0.4]);
        assert_eq!(gs.hardness, vec![Hardness::Hard, Hardness::Soft]);
        assert_eq!(leaf.priorities.pg(), &[1, 2]);
    }

    #[test]
    fn parses_nested_tree() {
        let t = parse_spec(
            "and(or(goal=[0.2,0.9], goal=[0.9,0.2]), goal=[1e0, 0.5])",
            2,
        )
        .unwrap();
        assert_eq!(t.depth(), 2);
        assert_eq!(t.leaves().len(), 3);
        match &t {
            SpecTree::Node {
                connective,
                children,
            } => {
                assert_eq!(*connective, Connective::And);
                assert!(matches!(
                    children[0],
                    SpecTree::Node {
                        connective: Connective::Or,
                        ..
                    }
                ));
            }
            _ => panic!("expected a node"),
        }
    }

    #[test]
    fn blank_and_pareto_leaves() {
        assert_eq!(parse_spec("  ", 3).unwrap(), SpecTree::pareto(3));
        assert_eq!(parse_spec("pareto", 2).unwrap(), SpecTree::pareto(2));
        let t = parse_spec("hard = [soft, hard]; goal = [0.5, 0.5]", 2).unwrap();
        assert!(t.as_leaf().unwrap().has_hard());
    }

    #[test]
    fn rejects_contradiction() {
        let e = parse_spec("goal=[0.5,0.5]; pg=[1,1]; pf=[1,0]", 2).unwrap_err();
        assert!(e.to_string().contains("contradictory"), "{e}");
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(parse_spec("goal=[0.5]", 2).is_err());
        assert!(parse_spec("or(goal=[0.5,0.5])", 2).is_err());
        assert!(parse_spec("goal=[0.5,0.5] extra", 2).is_err());
        assert!(parse_spec("colour=[1,2]", 2).is_err());
        assert!(parse_spec("pg=[1.5,0]; goal=[0,0]", 2).is_err());
        assert!(parse_spec("goal=[0.5,0.5]; goal=[0.1,0.1]", 2).is_err());
        assert!(parse_spec("mask=[0,0]", 2).is_err());
    }
}
