//! Reader and writer for the subset of CoNLL-U that carries ID, FORM and HEAD.

use std::fmt::Write;

use thiserror::Error;

use super::{DepTree, Token, TreeError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConlluError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("sentence {sentence} (line {line}): {source}")]
    Tree {
        sentence: usize,
        line: usize,
        #[source]
        source: TreeError,
    },
}

fn parse_error(line: usize, message: impl Into<String>) -> ConlluError {
    ConlluError::Parse {
        line,
        message: message.into(),
    }
}

struct PendingSentence {
    start_line: usize,
    tokens: Vec<Token>,
    heads: Vec<usize>,
}

/// Parse CoNLL-U text into one tree per sentence block.
///
/// Multiword ranges (`3-4`) and empty nodes (`5.1`) are skipped.
pub fn parse_conllu(text: &str) -> Result<Vec<DepTree>, ConlluError> {
    let mut trees = Vec::new();
    let mut pending: Option<PendingSentence> = None;

    let finish = |pending: &mut Option<PendingSentence>, trees: &mut Vec<DepTree>| {
        if let Some(sentence) = pending.take() {
            let sentence_no = trees.len() + 1;
            let tree =
                DepTree::from_head_ids(sentence.tokens, &sentence.heads).map_err(|source| ConlluError::Tree {
                    sentence: sentence_no,
                    line: sentence.start_line,
                    source,
                })?;
            trees.push(tree);
        }
        Ok::<(), ConlluError>(())
    };

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if line.trim().is_empty() {
            finish(&mut pending, &mut trees)?;
            continue;
        }
        if line.starts_with('#') {
            continue;
        }
        let columns: Vec<&str> = line.split('\t').collect();
        if columns.len() < 7 {
            return Err(parse_error(
                line_no,
                format!("expected at least 7 tab-separated columns, found {}", columns.len()),
            ));
        }
        let id = columns[0];
        if id.contains('-') || id.contains('.') {
            continue;
        }
        let id: usize = id
            .parse()
            .map_err(|_| parse_error(line_no, format!("malformed ID {:?}", columns[0])))?;
        let head: usize = columns[6]
            .parse()
            .map_err(|_| parse_error(line_no, format!("malformed HEAD {:?}", columns[6])))?;
        let sentence = pending.get_or_insert_with(|| PendingSentence {
            start_line: line_no,
            tokens: Vec::new(),
            heads: Vec::new(),
        });
        let expected = sentence.tokens.len() + 1;
        if id != expected {
            return Err(parse_error(
                line_no,
                format!("ID {} out of sequence, expected {}", id, expected),
            ));
        }
        let token = Token::new(id, columns[1]).map_err(|_| parse_error(line_no, "empty FORM"))?;
        sentence.tokens.push(token);
        sentence.heads.push(head);
    }
    finish(&mut pending, &mut trees)?;
    Ok(trees)
}

/// Write trees as CoNLL-U with ID, FORM and HEAD filled and `_` elsewhere.
pub fn to_conllu(trees: &[DepTree]) -> String {
    let mut out = String::new();
    for tree in trees {
        for (token, head) in tree.tokens().iter().zip(tree.head_ids()) {
            writeln!(out, "{}\t{}\t_\t_\t_\t_\t{}\t_\t_\t_", token.index, token.form, head).unwrap();
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(id: &str, form: &str, head: &str) -> String {
        format!("{}\t{}\t_\t_\t_\t_\t{}\t_\t_\t_\n", id, form, head)
    }

    #[test]
    fn minimal_sentence() {
        let text = format!(
            "# text = Marie dort\n{}{}",
            row("1", "Marie", "2"),
            row("2", "dort", "0")
        );
        let trees = parse_conllu(&text).unwrap();
        assert_eq!(trees.len(), 1);
        assert_eq!(trees[0].len(), 2);
        assert_eq!(trees[0].edges().collect::<Vec<_>>(), vec![(1, 0)]);
        assert_eq!(trees[0].token(0).char_length, 5);
    }

    #[test]
    fn ranges_and_empty_nodes_are_skipped() {
        let text = [
            row("1", "Il", "2"),
            row("2", "parle", "0"),
            row("3-4", "du", "_"),
            row("3", "de", "5"),
            row("4", "le", "5"),
            row("4.1", "x", "_"),
            row("5", "livre", "2"),
        ]
        .concat();
        let trees = parse_conllu(&text).unwrap();
        assert_eq!(trees[0].len(), 5);
        assert_eq!(trees[0].head_ids(), vec![2, 0, 5, 5, 2]);
    }

    #[test]
    fn malformed_head_reports_line() {
        let text = format!("# c\n{}{}", row("1", "Marie", "x"), row("2", "dort", "0"));
        assert_eq!(
            parse_conllu(&text).unwrap_err(),
            ConlluError::Parse {
                line: 2,
                message: "malformed HEAD \"x\"".into()
            }
        );
    }

    #[test]
    fn tree_errors_carry_sentence_index() {
        let text = format!("{}\n{}{}", row("1", "A", "0"), row("1", "B", "0"), row("2", "C", "0"));
        match parse_conllu(&text).unwrap_err() {
            ConlluError::Tree { sentence, line, source } => {
                assert_eq!(sentence, 2);
                assert_eq!(line, 3);
                assert_eq!(source, TreeError::MultiRoot(2));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn short_lines_and_bad_ids() {
        assert!(matches!(
            parse_conllu("1\tA\t0\n").unwrap_err(),
            ConlluError::Parse { line: 1, .. }
        ));
        let text = row("2", "A", "0");
        assert!(matches!(parse_conllu(&text).unwrap_err(), ConlluError::Parse { .. }));
    }

    #[test]
    fn empty_input_has_no_sentences() {
        assert!(parse_conllu("").unwrap().is_empty());
        assert!(parse_conllu("# only a comment\n\n").unwrap().is_empty());
    }
}
