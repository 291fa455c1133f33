//! Content-addressed JSON cache: `<dir>/<2 hex>/<64 hex>.json`.

use std::path::{Path, PathBuf};

use anyhow::Result;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub const CACHE_SCHEMA: &str = "nakayama.cache/1";

pub struct Cache {
    dir: PathBuf,
}

/// Key material: the operation name plus its canonical input.
pub fn key(p: u32, r: usize, n: usize, op: &str, input: &Value) -> String {
    let material = json!({
        "schema": CACHE_SCHEMA,
        "p": p,
        "r": r,
        "N": n,
        "op": op,
        "input": input,
    });
    hex::encode(Sha256::digest(material.to_string().as_bytes()))
}

impl Cache {
    pub fn new(dir: &Path) -> Self {
        Cache { dir: dir.to_path_buf() }
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(&key[..2]).join(format!("{key}.json"))
    }

    /// Entries with another schema or key, or that fail to parse, are misses.
    pub fn get(&self, key: &str) -> Option<Value> {
        let text = std::fs::read_to_string(self.path(key)).ok()?;
        let mut v: Value = serde_json::from_str(&text).ok()?;
        if v["schema"] != CACHE_SCHEMA || v["key"] != key {
            return None;
        }
        Some(v["value"].take())
    }

    pub fn put(&self, key: &str, value: &Value) -> Result<()> {
        let path = self.path(key);
        std::fs::create_dir_all(path.parent().expect("two levels"))?;
        let tmp = path.with_extension("tmp");
        let doc = json!({"schema": CACHE_SCHEMA, "key": key, "value": value});
        std::fs::write(&tmp, serde_json::to_vec_pretty(&doc)?)?;
        std::fs::rename(tmp, path)?;
        Ok(())
    }

    pub fn get_or_insert(&self, key: &str, compute: impl FnOnce() -> Result<Value>) -> Result<Value> {
        if let Some(v) = self.get(key) {
            return Ok(v);
        }
        let v = compute()?;
        self.put(key, &v)?;
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stale_entries_are_ignored() {
        let dir = tempfile::tempdir().unwrap();
        let c = Cache::new(dir.path());
        let k = key(7, 1, 2, "hom", &json!(["X[0,0]", "X[0,1]"]));
        assert!(c.get(&k).is_none());
        c.put(&k, &json!({"dim": 1})).unwrap();
        assert_eq!(c.get(&k).unwrap()["dim"], 1);
        let path = c.path(&k);
        let text = std::fs::read_to_string(&path).unwrap().replace(CACHE_SCHEMA, "nakayama.cache/0");
        std::fs::write(&path, text).unwrap();
        assert!(c.get(&k).is_none());
        let v = c.get_or_insert(&k, || Ok(json!(3))).unwrap();
        assert_eq!(v, 3);
        assert_eq!(c.get(&k).unwrap(), 3);
    }

    #[test]
    fn keys_depend_on_every_field() {
        let base = key(7, 1, 2, "hom", &json!(1));
        assert_ne!(base, key(11, 1, 2, "hom", &json!(1)));
        assert_ne!(base, key(7, 2, 2, "hom", &json!(1)));
        assert_ne!(base, key(7, 1, 3, "hom", &json!(1)));
        assert_ne!(base, key(7, 1, 2, "cone", &json!(1)));
        assert_ne!(base, key(7, 1, 2, "hom", &json!(2)));
    }
}
