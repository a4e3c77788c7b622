use std::io::IsTerminal;

use serde_json::Value;

use crate::Format;

#[derive(Clone, Copy)]
pub enum Tone {
    Good,
    Bad,
    Unsure,
}

pub struct Output {
    format: Format,
    color: bool,
}

impl Output {
    pub fn new(format: Format) -> Self {
        let enabled = std::env::var("SGQUIVER_COLOR").map_or(true, |v| v != "0");
        Output {
            format,
            color: enabled && format == Format::Text && std::io::stdout().is_terminal(),
        }
    }

    /// Prints `json` (with the schema version added) or the text rendering.
    pub fn emit(&self, json: Value, text: impl FnOnce() -> String) {
        match self.format {
            Format::Json => {
                let mut json = json;
                if let Value::Object(map) = &mut json {
                    map.insert("schema".into(), Value::from(1));
                }
                println!("{}", serde_json::to_string_pretty(&json).expect("JSON values serialize"));
            }
            Format::Text => println!("{}", text()),
        }
    }

    pub fn paint(&self, word: &str, tone: Tone) -> String {
        if !self.color {
            return word.to_string();
        }
        let code = match tone {
            Tone::Good => "32",
            Tone::Bad => "31",
            Tone::Unsure => "33",
        };
        format!("\x1b[{code}m{word}\x1b[0m")
    }

    pub fn paint_bool(&self, b: bool) -> String {
        if b {
            self.paint("true", Tone::Good)
        } else {
            self.paint("false", Tone::Bad)
        }
    }
}
