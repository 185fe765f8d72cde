use std::io::BufRead;

use quick_xml::events::{BytesStart, Event};
use quick_xml::Reader;
use serde::{Deserialize, Serialize};

use super::IngestError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PostType {
    Question,
    Answer,
}

/// One `<row/>` of a Posts dump, before any filtering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawRow {
    pub id: u64,
    pub post_type: PostType,
    pub parent_id: Option<u64>,
    pub accepted_answer_id: Option<u64>,
    pub title: Option<String>,
    /// HTML markup, already XML-unescaped once.
    pub body: String,
    pub tags: Vec<String>,
    pub score: i64,
}

/// Rows that were read but not yielded.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SkipTally {
    /// PostTypeId other than 1 or 2 (wiki, tag excerpts, ...).
    pub other_type: u64,
    /// A required attribute was absent or unparseable.
    pub missing_attribute: u64,
}

impl SkipTally {
    pub fn total(&self) -> u64 {
        self.other_type + self.missing_attribute
    }
}

/// Parse the dump's tag list. Both `<a><b>` and `|a|b|` encodings are accepted.
pub fn parse_tags(raw: &str) -> Vec<String> {
    raw.split(['<', '>', '|'])
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(str::to_lowercase)
        .collect()
}

/// Streaming iterator over the rows of a Posts dump.
///
/// Holds one row at a time. Malformed XML ends the stream with an error
/// carrying the byte offset.
pub struct DumpReader<R: BufRead> {
    reader: Reader<R>,
    buf: Vec<u8>,
    skips: SkipTally,
    rows_seen: u64,
    done: bool,
}

/// Stream rows from any buffered reader. See [`DumpReader`].
pub fn parse_dump<R: BufRead>(input: R) -> DumpReader<R> {
    DumpReader { reader: Reader::from_reader(input), buf: Vec::with_capacity(4096), skips: SkipTally::default(), rows_seen: 0, done: false }
}

impl<R: BufRead> DumpReader<R> {
    pub fn skips(&self) -> SkipTally {
        self.skips
    }

    /// Every `<row>` element encountered, skipped or not.
    pub fn rows_seen(&self) -> u64 {
        self.rows_seen
    }

    fn malformed(&self, offset: u64, message: impl Into<String>) -> IngestError {
        IngestError::Xml { offset, message: message.into() }
    }

    fn convert(&mut self, e: &BytesStart<'_>, offset: u64) -> Result<Option<RawRow>, IngestError> {
        let mut id = None;
        let mut type_id = None;
        let mut parent_id = None;
        let mut accepted = None;
        let mut title = None;
        let mut body = None;
        let mut tags = None;
        let mut score = None;
        for attr in e.attributes() {
            let attr = attr.map_err(|err| self.malformed(offset, err.to_string()))?;
            let value = attr.unescape_value().map_err(|err| self.malformed(offset, err.to_string()))?;
            match attr.key.as_ref() {
                b"Id" => id = Some(value.trim().parse::<u64>().ok()),
                b"PostTypeId" => type_id = Some(value.into_owned()),
                b"ParentId" => parent_id = Some(value.trim().parse::<u64>().ok()),
                b"AcceptedAnswerId" => accepted = value.trim().parse::<u64>().ok(),
                b"Title" => title = Some(value.into_owned()),
                b"Body" => body = Some(value.into_owned()),
                b"Tags" => tags = Some(parse_tags(&value)),
                b"Score" => score = value.trim().parse::<i64>().ok(),
                _ => {}
            }
        }
        let post_type = match type_id.as_deref().map(str::trim) {
            Some("1") => PostType::Question,
            Some("2") => PostType::Answer,
            Some(_) => {
                self.skips.other_type += 1;
                return Ok(None);
            }
            None => {
                self.skips.missing_attribute += 1;
                return Ok(None);
            }
        };
        let (Some(Some(id)), Some(body)) = (id, body) else {
            self.skips.missing_attribute += 1;
            return Ok(None);
        };
        let row = match post_type {
            PostType::Question => {
                if title.is_none() {
                    self.skips.missing_attribute += 1;
                    return Ok(None);
                }
                RawRow { id, post_type, parent_id: None, accepted_answer_id: accepted, title, body, tags: tags.unwrap_or_default(), score: score.unwrap_or(0) }
            }
            PostType::Answer => {
                let Some(Some(parent)) = parent_id else {
                    self.skips.missing_attribute += 1;
                    return Ok(None);
                };
                RawRow { id, post_type, parent_id: Some(parent), accepted_answer_id: None, title, body, tags: Vec::new(), score: score.unwrap_or(0) }
            }
        };
        Ok(Some(row))
    }
}

impl<R: BufRead> Iterator for DumpReader<R> {
    type Item = Result<RawRow, IngestError>;

    fn next(&mut self) -> Option<Self::Item> {
        while !self.done {
            self.buf.clear();
            let offset = self.reader.buffer_position();
            let event = match self.reader.read_event_into(&mut self.buf) {
                Ok(ev) => ev.into_owned(),
                Err(err) => {
                    self.done = true;
                    let at = self.reader.error_position();
                    return Some(Err(self.malformed(at, err.to_string())));
                }
            };
            match event {
                Event::Eof => self.done = true,
                Event::Empty(e) | Event::Start(e) if e.name().as_ref() == b"row" => {
                    self.rows_seen += 1;
                    match self.convert(&e, offset) {
                        Ok(Some(row)) => return Some(Ok(row)),
                        Ok(None) => {}
                        Err(err) => {
                            self.done = true;
                            return Some(Err(err));
                        }
                    }
                }
                _ => {}
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(xml: &str) -> (Vec<RawRow>, SkipTally) {
        let mut r = parse_dump(xml.as_bytes());
        let out = r.by_ref().collect::<Result<Vec<_>, _>>().unwrap();
        (out, r.skips())
    }

    #[test]
    fn question_and_answer_rows() {
        let xml = r#"<posts>
          <row Id="7" PostTypeId="1" AcceptedAnswerId="9" Title="T" Body="&lt;p&gt;q&lt;/p&gt;" Tags="&lt;java&gt;"/>
          <row Id="9" PostTypeId="2" ParentId="7" Body="..."/>
        </posts>"#;
        let (rows, skips) = rows(xml);
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].id, 7);
        assert_eq!(rows[0].accepted_answer_id, Some(9));
        assert_eq!(rows[0].tags, ["java"]);
        assert_eq!(rows[0].body, "<p>q</p>");
        assert_eq!(rows[1].post_type, PostType::Answer);
        assert_eq!(rows[1].parent_id, Some(7));
        assert_eq!(skips.total(), 0);
    }

    #[test]
    fn skip_tally() {
        let xml = r#"<posts>
          <row Id="1" PostTypeId="4" Body=""/>
          <row Id="2" PostTypeId="1" Body="no title"/>
          <row Id="3" PostTypeId="2" Body="orphan without parent"/>
          <row PostTypeId="2" ParentId="1" Body="no id"/>
          <row Id="5" PostTypeId="1" Title="ok" Body="b"/>
        </posts>"#;
        let (rows, skips) = rows(xml);
        assert_eq!(rows.len(), 1);
        assert_eq!(skips, SkipTally { other_type: 1, missing_attribute: 3 });
        assert!(rows[0].tags.is_empty());
    }

    #[test]
    fn malformed_xml_reports_offset() {
        let xml = "<posts>\n<row Id=\"1\" PostTypeId=\"1\" Title=\"t\" Body=\"b\"/>\n<row Id=\"2\" </posts>";
        let results: Vec<_> = parse_dump(xml.as_bytes()).collect();
        assert!(results[0].is_ok());
        match &results[1] {
            Err(IngestError::Xml { offset, .. }) => assert!(*offset > 0, "{offset}"),
            other => panic!("{other:?}"),
        }
        assert_eq!(results.len(), 2);
    }

    #[test]
    fn tag_encodings() {
        assert_eq!(parse_tags("<Java><apache-camel>"), ["java", "apache-camel"]);
        assert_eq!(parse_tags("|java|spring|"), ["java", "spring"]);
        assert!(parse_tags("").is_empty());
    }
}
