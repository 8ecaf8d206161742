//! Provenance record embedded in every artifact the tool writes.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Clone, Debug, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub tool_version: &'static str,
    pub inputs: Vec<InputDigest>,
    pub catalog_max_size: Option<usize>,
    pub flags: BTreeMap<String, Value>,
    /// Only recorded with `--timing`, so default output is reproducible.
    pub wall_time_ms: Option<u64>,
}

pub struct Recorder {
    manifest: RunManifest,
    started: Instant,
    timing: bool,
}

impl Recorder {
    pub fn new(command: &str, flags: Value, timing: bool) -> Self {
        let flags = match flags {
            Value::Object(map) => map.into_iter().filter(|(_, v)| !v.is_null()).collect(),
            _ => BTreeMap::new(),
        };
        Recorder {
            manifest: RunManifest {
                command: command.to_string(),
                tool_version: env!("CARGO_PKG_VERSION"),
                inputs: Vec::new(),
                catalog_max_size: None,
                flags,
                wall_time_ms: None,
            },
            started: Instant::now(),
            timing,
        }
    }

    pub fn input(&mut self, path: &str, bytes: &[u8]) {
        self.manifest.inputs.push(InputDigest {
            path: path.to_string(),
            sha256: format!("{:x}", Sha256::digest(bytes)),
        });
    }

    pub fn catalog(&mut self, max_size: usize) {
        let m = &mut self.manifest.catalog_max_size;
        *m = Some(m.map_or(max_size, |k| k.max(max_size)));
    }

    pub fn finish(&self) -> RunManifest {
        let mut m = self.manifest.clone();
        if self.timing {
            m.wall_time_ms = Some(self.started.elapsed().as_millis() as u64);
        }
        m
    }
}
