//! Extraction of the first JSON document from a free-form model reply.
//! Fenced code blocks win over loose braces; prose around either is ignored.

/// Returns the first JSON-object candidate in `reply`, or `None` when the
/// reply carries nothing brace-shaped.
pub fn extract_json_document(reply: &str) -> Option<String> {
    if let Some(block) = first_fenced_block(reply) {
        let trimmed = block.trim();
        if trimmed.starts_with('{') {
            return Some(trimmed.to_string());
        }
    }
    outermost_braces(reply)
}

fn first_fenced_block(reply: &str) -> Option<&str> {
    let mut rest = reply;
    loop {
        let open = rest.find("```")?;
        let after_fence = &rest[open + 3..];
        // Skip the info string (e.g. "json") up to the end of the line.
        let body_start = after_fence.find('\n').map(|i| i + 1).unwrap_or(0);
        let body = &after_fence[body_start..];
        let Some(close) = body.find("```") else {
            return None;
        };
        let content = &body[..close];
        if content.trim().starts_with('{') {
            return Some(content);
        }
        rest = &body[close + 3..];
    }
}

/// Scans for the first `{` and returns the substring up to its balancing
/// brace, skipping braces inside JSON string literals.
fn outermost_braces(reply: &str) -> Option<String> {
    let start = reply.find('{')?;
    let mut depth = 0usize;
    let mut in_string = false;
    let mut escaped = false;
    for (offset, c) in reply[start..].char_indices() {
        if in_string {
            if escaped {
                escaped = false;
            } else if c == '\\' {
                escaped = true;
            } else if c == '"' {
                in_string = false;
            }
            continue;
        }
        match c {
            '"' => in_string = true,
            '{' => depth += 1,
            '}' => {
                depth -= 1;
                if depth == 0 {
                    return Some(reply[start..start + offset + 1].to_string());
                }
            }
            _ => {}
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fenced_block_with_prose_around() {
        let reply = "Here is the corrected model:\n```json\n{\"domain\": \"d\"}\n```\nDone.";
        assert_eq!(extract_json_document(reply).unwrap(), "{\"domain\": \"d\"}");
    }

    #[test]
    fn fence_without_language_tag() {
        let reply = "```\n{\"a\": 1}\n```";
        assert_eq!(extract_json_document(reply).unwrap(), "{\"a\": 1}");
    }

    #[test]
    fn loose_braces_with_prose() {
        let reply = "Sure! {\"a\": {\"b\": 2}} hope that helps";
        assert_eq!(extract_json_document(reply).unwrap(), "{\"a\": {\"b\": 2}}");
    }

    #[test]
    fn braces_inside_strings_do_not_confuse_the_scan() {
        let reply = r#"{"note": "a } inside", "x": 1}"#;
        assert_eq!(extract_json_document(reply).unwrap(), reply);
    }

    #[test]
    fn refusals_yield_nothing() {
        assert_eq!(extract_json_document("I cannot help with that."), None);
    }

    #[test]
    fn non_json_fence_falls_back_to_braces() {
        let reply = "```text\nhello\n```\n{\"a\": 1}";
        assert_eq!(extract_json_document(reply).unwrap(), "{\"a\": 1}");
    }

    #[test]
    fn unbalanced_braces_yield_nothing() {
        assert_eq!(extract_json_document("{\"a\": 1"), None);
    }
}
