//! A small XML reader, enough to check emitted MathML for
//! well-formedness and to inspect its element structure in tests. Not a
//! general XML parser: no DTDs, processing instructions or comments.

use std::collections::BTreeSet;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum XmlNode {
    Element(XmlElement),
    Text(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XmlElement {
    pub name: String,
    pub attrs: Vec<(String, String)>,
    pub children: Vec<XmlNode>,
}

impl XmlElement {
    /// Names of this element and all descendants.
    pub fn element_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_names(&mut out);
        out
    }

    fn collect_names(&self, out: &mut BTreeSet<String>) {
        out.insert(self.name.clone());
        for c in &self.children {
            if let XmlNode::Element(e) = c {
                e.collect_names(out);
            }
        }
    }

    /// Depth-first search for the first descendant with this name.
    pub fn find(&self, name: &str) -> Option<&XmlElement> {
        if self.name == name {
            return Some(self);
        }
        for c in &self.children {
            if let XmlNode::Element(e) = c {
                if let Some(found) = e.find(name) {
                    return Some(found);
                }
            }
        }
        None
    }

    /// Concatenated text content of this element's direct children.
    pub fn text(&self) -> String {
        self.children
            .iter()
            .filter_map(|c| match c {
                XmlNode::Text(t) => Some(t.as_str()),
                XmlNode::Element(_) => None,
            })
            .collect()
    }

    pub fn attr(&self, name: &str) -> Option<&str> {
        self.attrs
            .iter()
            .find(|(k, _)| k == name)
            .map(|(_, v)| v.as_str())
    }

    /// Structure with all attributes and text removed; equality on the
    /// result compares element shape only.
    pub fn shape(&self) -> XmlElement {
        XmlElement {
            name: self.name.clone(),
            attrs: Vec::new(),
            children: self
                .children
                .iter()
                .filter_map(|c| match c {
                    XmlNode::Element(e) => Some(XmlNode::Element(e.shape())),
                    XmlNode::Text(_) => None,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum XmlError {
    #[error("offset {0}: unexpected end of document")]
    UnexpectedEnd(usize),
    #[error("offset {0}: malformed tag")]
    MalformedTag(usize),
    #[error("offset {offset}: closing </{found}> does not match <{open}>")]
    MismatchedClose {
        offset: usize,
        open: String,
        found: String,
    },
    #[error("offset {0}: unknown entity reference")]
    BadEntity(usize),
    #[error("offset {0}: content outside the root element")]
    TrailingContent(usize),
    #[error("document has no root element")]
    NoRoot,
}

/// Parses a document that must consist of exactly one root element.
pub fn parse_document(input: &str) -> Result<XmlElement, XmlError> {
    let mut p = Reader { src: input, pos: 0 };
    p.skip_ws();
    let root = match p.parse_node()? {
        Some(XmlNode::Element(e)) => e,
        _ => return Err(XmlError::NoRoot),
    };
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(XmlError::TrailingContent(p.pos));
    }
    Ok(root)
}

struct Reader<'a> {
    src: &'a str,
    pos: usize,
}

impl Reader<'_> {
    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_ascii_whitespace()) {
            self.bump();
        }
    }

    fn parse_node(&mut self) -> Result<Option<XmlNode>, XmlError> {
        match self.peek() {
            None => Ok(None),
            Some('<') => {
                if self.src[self.pos..].starts_with("</") {
                    Ok(None)
                } else {
                    Ok(Some(XmlNode::Element(self.parse_element()?)))
                }
            }
            Some(_) => {
                let text = self.parse_text()?;
                Ok(Some(XmlNode::Text(text)))
            }
        }
    }

    fn parse_element(&mut self) -> Result<XmlElement, XmlError> {
        let start = self.pos;
        self.bump(); // '<'
        let name = self.parse_name(start)?;
        let mut attrs = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                Some('/') => {
                    self.bump();
                    if self.bump() != Some('>') {
                        return Err(XmlError::MalformedTag(self.pos));
                    }
                    return Ok(XmlElement { name, attrs, children: Vec::new() });
                }
                Some('>') => {
                    self.bump();
                    break;
                }
                Some(c) if c.is_ascii_alphabetic() => {
                    attrs.push(self.parse_attr()?);
                }
                _ => return Err(XmlError::MalformedTag(self.pos)),
            }
        }
        let mut children = Vec::new();
        while let Some(node) = self.parse_node()? {
            children.push(node);
        }
        // Closing tag.
        if !self.src[self.pos..].starts_with("</") {
            return Err(XmlError::UnexpectedEnd(self.pos));
        }
        let close_at = self.pos;
        self.pos += 2;
        let close_name = self.parse_name(close_at)?;
        self.skip_ws();
        if self.bump() != Some('>') {
            return Err(XmlError::MalformedTag(self.pos));
        }
        if close_name != name {
            return Err(XmlError::MismatchedClose {
                offset: close_at,
                open: name,
                found: close_name,
            });
        }
        Ok(XmlElement { name, attrs, children })
    }

    fn parse_name(&mut self, err_at: usize) -> Result<String, XmlError> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '-' || c == '_' || c == ':')
        {
            self.bump();
        }
        if self.pos == start {
            return Err(XmlError::MalformedTag(err_at));
        }
        Ok(self.src[start..self.pos].to_string())
    }

    fn parse_attr(&mut self) -> Result<(String, String), XmlError> {
        let name = self.parse_name(self.pos)?;
        if self.bump() != Some('=') {
            return Err(XmlError::MalformedTag(self.pos));
        }
        if self.bump() != Some('"') {
            return Err(XmlError::MalformedTag(self.pos));
        }
        let mut value = String::new();
        loop {
            match self.peek() {
                None => return Err(XmlError::UnexpectedEnd(self.pos)),
                Some('"') => {
                    self.bump();
                    break;
                }
                Some('&') => value.push(self.parse_entity()?),
                Some('<') => return Err(XmlError::MalformedTag(self.pos)),
                Some(c) => {
                    self.bump();
                    value.push(c);
                }
            }
        }
        Ok((name, value))
    }

    fn parse_text(&mut self) -> Result<String, XmlError> {
        let mut out = String::new();
        loop {
            match self.peek() {
                None | Some('<') => break,
                Some('&') => out.push(self.parse_entity()?),
                Some('>') => return Err(XmlError::MalformedTag(self.pos)),
                Some(c) => {
                    self.bump();
                    out.push(c);
                }
            }
        }
        Ok(out)
    }

    fn parse_entity(&mut self) -> Result<char, XmlError> {
        let at = self.pos;
        self.bump(); // '&'
        let Some(end) = self.src[self.pos..].find(';') else {
            return Err(XmlError::BadEntity(at));
        };
        let body = &self.src[self.pos..self.pos + end];
        let c = match body {
            "amp" => '&',
            "lt" => '<',
            "gt" => '>',
            "quot" => '"',
            "apos" => '\'',
            _ => {
                let cp = body
                    .strip_prefix("#x")
                    .and_then(|h| u32::from_str_radix(h, 16).ok())
                    .or_else(|| body.strip_prefix('#').and_then(|d| d.parse().ok()))
                    .and_then(char::from_u32);
                cp.ok_or(XmlError::BadEntity(at))?
            }
        };
        self.pos += end + 1;
        Ok(c)
    }
}
