use serde::{Deserialize, Serialize};

use super::{EncoderError, Modality, ModalityTokenSequence};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PlanItem {
    Text { tokens: Vec<String> },
    /// `count` embeddings from the `index`-th modality sequence.
    Splice { modality: Modality, count: usize, index: usize },
}

/// Where each modality's embeddings go in the decoder input stream.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct PromptPlan {
    pub items: Vec<PlanItem>,
}

impl PromptPlan {
    pub fn len(&self) -> usize {
        self.items
            .iter()
            .map(|i| match i {
                PlanItem::Text { tokens } => tokens.len(),
                PlanItem::Splice { count, .. } => *count,
            })
            .sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn splices(&self) -> Vec<(Modality, usize)> {
        self.items
            .iter()
            .filter_map(|i| match i {
                PlanItem::Splice { modality, count, .. } => Some((*modality, *count)),
                PlanItem::Text { .. } => None,
            })
            .collect()
    }

    fn push_text(&mut self, words: impl IntoIterator<Item = String>) {
        let words: Vec<String> = words.into_iter().collect();
        if words.is_empty() {
            return;
        }
        if let Some(PlanItem::Text { tokens }) = self.items.last_mut() {
            tokens.extend(words);
        } else {
            self.items.push(PlanItem::Text { tokens: words });
        }
    }
}

/// Walks a whitespace-separated template. `{text}` expands to `text_tokens`,
/// each `{m}` consumes the next modality sequence in order, and any other
/// word is a literal text token.
pub fn assemble_prompt(
    text_tokens: &[String],
    sequences: &[ModalityTokenSequence],
    template: &str,
) -> Result<PromptPlan, EncoderError> {
    let slots = template.split_whitespace().filter(|w| *w == "{m}").count();
    if slots != sequences.len() {
        return Err(EncoderError::SlotCount {
            slots,
            given: sequences.len(),
        });
    }
    let mut plan = PromptPlan::default();
    let mut next = 0;
    for word in template.split_whitespace() {
        match word {
            "{text}" => plan.push_text(text_tokens.iter().cloned()),
            "{m}" => {
                let s = &sequences[next];
                plan.items.push(PlanItem::Splice {
                    modality: s.modality,
                    count: s.tokens(),
                    index: next,
                });
                next += 1;
            }
            w => plan.push_text([w.to_string()]),
        }
    }
    Ok(plan)
}
