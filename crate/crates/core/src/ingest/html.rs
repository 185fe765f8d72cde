//! Tag stripping and entity decoding for post bodies.
//!
//! Covers the five XML entities and numeric references. Anything that does
//! not look like a tag is kept as text, so broken markup never fails.

/// Decode `&amp; &lt; &gt; &quot; &apos;` and `&#NN;` / `&#xHH;`. Unknown
/// entities are left as written.
pub fn decode_entities(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut rest = s;
    while let Some(amp) = rest.find('&') {
        out.push_str(&rest[..amp]);
        rest = &rest[amp..];
        let decoded = rest[1..].find(';').filter(|&semi| semi <= 10).and_then(|semi| {
            let name = &rest[1..semi + 1];
            let c = match name {
                "amp" => Some('&'),
                "lt" => Some('<'),
                "gt" => Some('>'),
                "quot" => Some('"'),
                "apos" => Some('\''),
                _ => {
                    let code = if let Some(hex) = name.strip_prefix("#x").or_else(|| name.strip_prefix("#X")) {
                        u32::from_str_radix(hex, 16).ok()
                    } else if let Some(dec) = name.strip_prefix('#') {
                        dec.parse().ok()
                    } else {
                        None
                    };
                    code.and_then(char::from_u32)
                }
            };
            c.map(|c| (c, semi + 2))
        });
        match decoded {
            Some((c, len)) => {
                out.push(c);
                rest = &rest[len..];
            }
            None => {
                out.push('&');
                rest = &rest[1..];
            }
        }
    }
    out.push_str(rest);
    out
}

/// A tag at the start of `s`: `<name ...>` or `</name>`. Returns the
/// lowercase name, whether it closes, and its byte length.
fn tag_at(s: &str) -> Option<(String, bool, usize)> {
    let bytes = s.as_bytes();
    if bytes.first() != Some(&b'<') {
        return None;
    }
    let (closing, name_start) = if bytes.get(1) == Some(&b'/') { (true, 2) } else { (false, 1) };
    if !bytes.get(name_start).is_some_and(u8::is_ascii_alphabetic) {
        return None;
    }
    let end = s[1..].find(['>', '<']).map(|i| i + 1)?;
    if bytes[end] != b'>' {
        return None;
    }
    let name: String = s[name_start..end]
        .chars()
        .take_while(|c| c.is_ascii_alphanumeric())
        .collect::<String>()
        .to_ascii_lowercase();
    Some((name, closing, end + 1))
}

fn collapse_whitespace(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Split an HTML body into plain text and the contents of every `<code>`
/// element. Code keeps its whitespace; plain text has tags replaced by
/// spaces and whitespace collapsed.
pub fn extract_segments(html_body: &str) -> (String, Vec<String>) {
    let mut text = String::new();
    let mut code_blocks = Vec::new();
    let mut code: Option<String> = None;
    let mut rest = html_body;
    while !rest.is_empty() {
        let lt = rest.find('<').unwrap_or(rest.len());
        let chunk = &rest[..lt];
        match &mut code {
            Some(buf) => buf.push_str(chunk),
            None => text.push_str(chunk),
        }
        rest = &rest[lt..];
        if rest.is_empty() {
            break;
        }
        match tag_at(rest) {
            Some((name, closing, len)) => {
                rest = &rest[len..];
                if name == "code" {
                    if closing {
                        if let Some(buf) = code.take() {
                            code_blocks.push(decode_entities(&buf));
                        }
                    } else if code.is_none() {
                        code = Some(String::new());
                    }
                    text.push(' ');
                } else if code.is_none() {
                    text.push(' ');
                } else if name == "br" {
                    if let Some(buf) = code.as_mut() {
                        buf.push('\n');
                    }
                }
            }
            None => {
                match &mut code {
                    Some(buf) => buf.push('<'),
                    None => text.push('<'),
                }
                rest = &rest[1..];
            }
        }
    }
    if let Some(buf) = code {
        code_blocks.push(decode_entities(&buf));
    }
    (collapse_whitespace(&decode_entities(&text)), code_blocks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_bodies() {
        assert_eq!(
            extract_segments("<p>use</p><pre><code>int x;</code></pre>"),
            ("use".to_string(), vec!["int x;".to_string()])
        );
        assert_eq!(extract_segments("<p>no code here</p>"), ("no code here".to_string(), vec![]));
    }

    #[test]
    fn entities_in_code_and_text() {
        let (text, code) = extract_segments("<p>a &amp; b&#33;</p><code>if (a &lt; b &amp;&amp; c) {}</code>");
        assert_eq!(text, "a & b!");
        assert_eq!(code, ["if (a < b && c) {}"]);
        assert_eq!(decode_entities("&#x41;&unknown;&"), "A&unknown;&");
    }

    #[test]
    fn tags_inside_code_are_stripped() {
        let (_, code) = extract_segments("<pre><code><b>List</b>&lt;String&gt; xs;\n</code></pre>");
        assert_eq!(code, ["List<String> xs;\n"]);
    }

    #[test]
    fn broken_markup_recovers() {
        let (text, code) = extract_segments("<p>a < b and 3<4</p><code>open");
        assert_eq!(text, "a < b and 3<4");
        assert_eq!(code, ["open"]);
        let (text, code) = extract_segments("</code>stray <p");
        assert_eq!(text, "stray <p");
        assert!(code.is_empty());
    }
}
