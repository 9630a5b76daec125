use crate::error::{Error, Result};

use super::Document;

/// Splits on `.`, `!` or `?` followed by whitespace.
///
/// Abbreviations are split too ("Dr. Smith" yields "Dr." and "Smith ...").
/// Text without terminal punctuation is returned as one sentence; empty or
/// whitespace-only text yields no sentences.
pub fn split_sentences(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut start = 0;
    let mut chars = text.char_indices().peekable();
    while let Some((i, c)) = chars.next() {
        if matches!(c, '.' | '!' | '?') {
            if let Some(&(j, next)) = chars.peek() {
                if next.is_whitespace() {
                    push_trimmed(&mut out, &text[start..j]);
                    start = j;
                }
            } else {
                let end = i + c.len_utf8();
                push_trimmed(&mut out, &text[start..end]);
                start = end;
            }
        }
    }
    push_trimmed(&mut out, &text[start..]);
    out
}

fn push_trimmed(out: &mut Vec<String>, s: &str) {
    let s = s.trim();
    if !s.is_empty() {
        out.push(s.to_string());
    }
}

/// A window of consecutive sentences of one document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Passage {
    pub doc_id: String,
    pub passage_index: usize,
    /// Inclusive.
    pub sentence_start: usize,
    /// Inclusive.
    pub sentence_end: usize,
    pub text: String,
}

/// Sentence ranges `[start, end]` for `n` sentences.
///
/// Windows start at 0, stride, 2*stride, ... and emission stops after the
/// first window that reaches the final sentence.
pub fn window_ranges(n: usize, window: usize, stride: usize) -> Result<Vec<(usize, usize)>> {
    if window == 0 || stride == 0 || stride > window {
        return Err(Error::Config(format!(
            "passaging requires window >= 1 and 1 <= stride <= window (window={window}, stride={stride})"
        )));
    }
    let mut ranges = Vec::new();
    if n == 0 {
        return Ok(ranges);
    }
    let mut start = 0;
    loop {
        let end = (start + window - 1).min(n - 1);
        ranges.push((start, end));
        if end == n - 1 {
            return Ok(ranges);
        }
        start += stride;
    }
}

/// Sliding-window passaging of a document.
///
/// The title, when present, is treated as the first sentence. Expansions are
/// not part of passage text.
pub fn split_passages(doc: &Document, window: usize, stride: usize) -> Result<Vec<Passage>> {
    let mut sentences = Vec::new();
    if let Some(title) = doc.title.as_deref() {
        push_trimmed(&mut sentences, title);
    }
    sentences.extend(split_sentences(&doc.text));
    let ranges = window_ranges(sentences.len(), window, stride)?;
    Ok(ranges
        .into_iter()
        .enumerate()
        .map(|(passage_index, (start, end))| Passage {
            doc_id: doc.doc_id.clone(),
            passage_index,
            sentence_start: start,
            sentence_end: end,
            text: sentences[start..=end].join(" "),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sentence_rules() {
        assert_eq!(split_sentences("A. B! C?"), vec!["A.", "B!", "C?"]);
        assert_eq!(
            split_sentences("no punctuation here"),
            vec!["no punctuation here"]
        );
        assert_eq!(
            split_sentences("Dr. Smith arrived. He left."),
            vec!["Dr.", "Smith arrived.", "He left."]
        );
        assert_eq!(
            split_sentences("version 1.5 works"),
            vec!["version 1.5 works"]
        );
        assert!(split_sentences("   ").is_empty());
    }

    fn doc_with(n: usize) -> Document {
        let text = (0..n)
            .map(|i| format!("Sentence {i}."))
            .collect::<Vec<_>>()
            .join(" ");
        Document::new(format!("d{n}"), text)
    }

    #[test]
    fn window_examples() {
        let spans = |n| {
            split_passages(&doc_with(n), 10, 5)
                .unwrap()
                .iter()
                .map(|p| (p.sentence_start, p.sentence_end))
                .collect::<Vec<_>>()
        };
        assert_eq!(spans(7), vec![(0, 6)]);
        assert_eq!(spans(10), vec![(0, 9)]);
        assert_eq!(spans(17), vec![(0, 9), (5, 14), (10, 16)]);
        assert_eq!(spans(15), vec![(0, 9), (5, 14)]);
    }

    #[test]
    fn passage_text_and_ordinals() {
        let ps = split_passages(&doc_with(12), 10, 5).unwrap();
        assert_eq!(ps.len(), 2);
        assert_eq!(ps[1].passage_index, 1);
        assert!(ps[1].text.starts_with("Sentence 5."));
        assert!(ps[1].text.ends_with("Sentence 11."));
    }

    #[test]
    fn empty_document_yields_nothing() {
        assert!(split_passages(&Document::new("e", ""), 10, 5)
            .unwrap()
            .is_empty());
        let titled = Document {
            title: Some("Only a title".into()),
            ..Document::new("t", "")
        };
        assert_eq!(split_passages(&titled, 10, 5).unwrap().len(), 1);
    }

    #[test]
    fn invalid_window() {
        assert!(window_ranges(3, 0, 1).is_err());
        assert!(window_ranges(3, 4, 5).is_err());
        assert!(window_ranges(3, 4, 0).is_err());
    }
}
