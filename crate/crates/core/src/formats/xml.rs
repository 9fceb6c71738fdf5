use roxmltree::Node;

use crate::error::FormatError;

pub(crate) fn escape_text(s: &str, out: &mut String) {
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            _ => out.push(c),
        }
    }
}

pub(crate) fn escape_attr(s: &str, out: &mut String) {
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\n' => out.push_str("&#10;"),
            '\t' => out.push_str("&#9;"),
            '\r' => out.push_str("&#13;"),
            _ => out.push(c),
        }
    }
}

pub(crate) fn line_of(node: Node<'_, '_>) -> usize {
    node.document().text_pos_at(node.range().start).row as usize
}

pub(crate) fn required_attr<'a>(node: Node<'a, '_>, name: &str) -> Result<&'a str, FormatError> {
    node.attribute(name).ok_or_else(|| {
        FormatError::parse(
            line_of(node),
            format!("<{}> lacks attribute `{name}`", node.tag_name().name()),
        )
    })
}

pub(crate) fn parse_number<T: std::str::FromStr>(node: Node<'_, '_>, name: &str, raw: &str) -> Result<T, FormatError> {
    raw.parse().map_err(|_| {
        FormatError::parse(line_of(node), format!("attribute `{name}`: `{raw}` is not a non-negative integer"))
    })
}

/// Child elements, rejecting stray non-whitespace text.
pub(crate) fn element_children<'a, 'i>(node: Node<'a, 'i>) -> Result<Vec<Node<'a, 'i>>, FormatError> {
    let mut out = Vec::new();
    for child in node.children() {
        if child.is_element() {
            out.push(child);
        } else if child.is_text() && !child.text().unwrap_or("").trim().is_empty() {
            return Err(FormatError::parse(
                line_of(child),
                format!("unexpected text inside <{}>", node.tag_name().name()),
            ));
        }
    }
    Ok(out)
}

pub(crate) fn expect_tag(node: Node<'_, '_>, name: &str) -> Result<(), FormatError> {
    if node.tag_name().name() != name {
        return Err(FormatError::parse(
            line_of(node),
            format!("expected <{name}>, found <{}>", node.tag_name().name()),
        ));
    }
    Ok(())
}

pub(crate) fn to_utf8(bytes: &[u8]) -> Result<&str, FormatError> {
    std::str::from_utf8(bytes).map_err(|e| {
        let line = bytes[..e.valid_up_to()].iter().filter(|&&b| b == b'\n').count() + 1;
        FormatError::parse(line, "input is not valid UTF-8")
    })
}
