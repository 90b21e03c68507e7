use super::{Expr, Func, Node};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Number(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

fn describe(token: &Token) -> String {
    match token {
        Token::Number(s) => format!("number `{s}`"),
        Token::Ident(s) => format!("`{s}`"),
        Token::Plus => "`+`".into(),
        Token::Minus => "`-`".into(),
        Token::Star => "`*`".into(),
        Token::Slash => "`/`".into(),
        Token::Caret => "`^`".into(),
        Token::LParen => "`(`".into(),
        Token::RParen => "`)`".into(),
        Token::End => "end of input".into(),
    }
}

fn tokenize(source: &str) -> Result<Vec<(Token, usize)>> {
    let bytes = source.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let simple = match c {
            b'+' => Some(Token::Plus),
            b'-' => Some(Token::Minus),
            b'*' => Some(Token::Star),
            b'/' => Some(Token::Slash),
            b'^' => Some(Token::Caret),
            b'(' => Some(Token::LParen),
            b')' => Some(Token::RParen),
            _ => None,
        };
        if let Some(tok) = simple {
            tokens.push((tok, start));
            i += 1;
        } else if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == b'.' {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if i < bytes.len() && bytes[i] == b'.' {
                i += 1;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
            }
            let mantissa = &source[start..i];
            if !mantissa.bytes().any(|b| b.is_ascii_digit()) {
                return Err(Error::Syntax {
                    offset: start,
                    message: "malformed number".into(),
                });
            }
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                let digits_start = j;
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
                if j == digits_start {
                    return Err(Error::Syntax {
                        offset: i,
                        message: "exponent of number has no digits".into(),
                    });
                }
                i = j;
            }
            tokens.push((Token::Number(source[start..i].to_string()), start));
        } else if c.is_ascii_alphabetic() || c == b'_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            tokens.push((Token::Ident(source[start..i].to_string()), start));
        } else {
            let ch = source[start..].chars().next().unwrap_or('?');
            return Err(Error::Syntax {
                offset: start,
                message: format!("unexpected character `{ch}`"),
            });
        }
    }
    tokens.push((Token::End, source.len()));
    Ok(tokens)
}

struct Parser {
    tokens: Vec<(Token, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos].0
    }

    fn offset(&self) -> usize {
        self.tokens[self.pos].1
    }

    fn bump(&mut self) -> (Token, usize) {
        let tok = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        tok
    }

    fn expect(&mut self, want: Token) -> Result<()> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(Error::Syntax {
                offset: self.offset(),
                message: format!("expected {}, found {}", describe(&want), describe(self.peek())),
            })
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            let offset = self.offset();
            let node = match self.peek() {
                Token::Plus => Node::Add as fn(_, _) -> _,
                Token::Minus => Node::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Expr {
                node: node(Box::new(lhs), Box::new(rhs)),
                offset,
            };
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let offset = self.offset();
            let node = match self.peek() {
                Token::Star => Node::Mul as fn(_, _) -> _,
                Token::Slash => Node::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = Expr {
                node: node(Box::new(lhs), Box::new(rhs)),
                offset,
            };
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        match self.peek() {
            Token::Minus => {
                let (_, offset) = self.bump();
                let inner = self.unary()?;
                Ok(Expr {
                    node: Node::Neg(Box::new(inner)),
                    offset,
                })
            }
            Token::Plus => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.base()?;
        if *self.peek() != Token::Caret {
            return Ok(base);
        }
        let (_, offset) = self.bump();
        let exponent = self.integer_exponent()?;
        Ok(Expr {
            node: Node::Pow(Box::new(base), exponent),
            offset,
        })
    }

    fn integer_exponent(&mut self) -> Result<i32> {
        let parenthesised = *self.peek() == Token::LParen;
        if parenthesised {
            self.bump();
        }
        let negative = match self.peek() {
            Token::Minus => {
                self.bump();
                true
            }
            Token::Plus => {
                self.bump();
                false
            }
            _ => false,
        };
        let offset = self.offset();
        let value = match self.bump().0 {
            Token::Number(text) if text.bytes().all(|b| b.is_ascii_digit()) => {
                text.parse::<i32>().map_err(|_| Error::Syntax {
                    offset,
                    message: format!("exponent `{text}` is too large"),
                })?
            }
            other => {
                return Err(Error::Syntax {
                    offset,
                    message: format!("exponent must be an integer literal, found {}", describe(&other)),
                })
            }
        };
        if parenthesised {
            self.expect(Token::RParen)?;
        }
        Ok(if negative { -value } else { value })
    }

    fn base(&mut self) -> Result<Expr> {
        let (token, offset) = self.bump();
        match token {
            Token::Number(text) => Ok(Expr {
                node: Node::Number(text),
                offset,
            }),
            Token::Ident(name) if name == "x" => Ok(Expr {
                node: Node::Var,
                offset,
            }),
            Token::Ident(name) if name == "pi" => Ok(Expr {
                node: Node::Pi,
                offset,
            }),
            Token::Ident(name) => {
                let func = Func::from_name(&name).ok_or(Error::UnknownFunction {
                    name: name.clone(),
                    offset,
                })?;
                self.expect(Token::LParen)?;
                let arg = self.expr()?;
                self.expect(Token::RParen)?;
                Ok(Expr {
                    node: Node::Call(func, Box::new(arg)),
                    offset,
                })
            }
            Token::LParen => {
                let inner = self.expr()?;
                self.expect(Token::RParen)?;
                Ok(inner)
            }
            other => Err(Error::Syntax {
                offset,
                message: format!("expected a number, `x`, a function or `(`, found {}", describe(&other)),
            }),
        }
    }
}

pub(super) fn parse(source: &str) -> Result<Expr> {
    let mut parser = Parser {
        tokens: tokenize(source)?,
        pos: 0,
    };
    let expr = parser.expr()?;
    if *parser.peek() != Token::End {
        return Err(Error::Syntax {
            offset: parser.offset(),
            message: format!("unexpected {}", describe(parser.peek())),
        });
    }
    Ok(expr)
}
