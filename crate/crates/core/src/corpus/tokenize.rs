use std::sync::Arc;

use super::porter;
use super::stopwords::StopwordList;

/// An ordered list of normalised terms.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TokenStream {
    pub tokens: Vec<String>,
}

impl TokenStream {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.tokens.iter().map(String::as_str)
    }
}

impl IntoIterator for TokenStream {
    type Item = String;
    type IntoIter = std::vec::IntoIter<String>;

    fn into_iter(self) -> Self::IntoIter {
        self.tokens.into_iter()
    }
}

/// Normalisation chain: lowercase, split on non-alphanumerics, drop
/// stopwords, Porter-stem the survivors.
///
/// Cheap to clone; the stopword set is shared.
#[derive(Debug, Clone)]
pub struct Analyzer {
    stopwords: Arc<StopwordList>,
    stem: bool,
}

impl Default for Analyzer {
    fn default() -> Self {
        Self::new(StopwordList::smart(), true)
    }
}

impl Analyzer {
    pub fn new(stopwords: StopwordList, stem: bool) -> Self {
        Self {
            stopwords: Arc::new(stopwords),
            stem,
        }
    }

    pub fn stopwords(&self) -> &StopwordList {
        &self.stopwords
    }

    pub fn tokenize(&self, text: &str) -> TokenStream {
        let mut tokens = Vec::new();
        self.for_each_token(text, |t| tokens.push(t));
        TokenStream { tokens }
    }

    /// Streams tokens to `f` without collecting them.
    pub fn for_each_token(&self, text: &str, mut f: impl FnMut(String)) {
        let lower = text.to_lowercase();
        for word in lower.split(|c: char| !c.is_alphanumeric()) {
            if word.is_empty() || self.stopwords.contains(word) {
                continue;
            }
            let term = if self.stem {
                porter::stem(word)
            } else {
                word.to_string()
            };
            if !term.is_empty() {
                f(term);
            }
        }
    }

    /// Number of surviving (non-stopword) tokens.
    pub fn count_tokens(&self, text: &str) -> usize {
        let mut n = 0;
        self.for_each_token(text, |_| n += 1);
        n
    }
}

/// Tokenizes with the default analyzer (SMART stopwords, Porter stemming).
pub fn tokenize(text: &str) -> TokenStream {
    Analyzer::default().tokenize(text)
}
