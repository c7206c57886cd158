//! Name-keyed strategy registries.
//!
//! Every algorithm family with interchangeable variants — kinetic symbols,
//! potential families, eigensolvers, probe functions — lives behind a trait
//! object registered here by name and selected at runtime from the config
//! or the command line.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};

/// A registry of named strategies for one algorithm family.
pub struct Registry<T: ?Sized> {
    family: &'static str,
    entries: BTreeMap<&'static str, Arc<T>>,
}

impl<T: ?Sized> Registry<T> {
    pub fn new(family: &'static str) -> Self {
        Registry {
            family,
            entries: BTreeMap::new(),
        }
    }

    pub fn register(&mut self, name: &'static str, strategy: Arc<T>) -> &mut Self {
        let previous = self.entries.insert(name, strategy);
        debug_assert!(previous.is_none(), "duplicate strategy name {name}");
        self
    }

    pub fn get(&self, name: &str) -> Result<Arc<T>> {
        self.entries.get(name).cloned().ok_or_else(|| {
            Error::UnknownStrategy {
                family: self.family,
                name: name.to_string(),
                known: self.names().join(", "),
            }
        })
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.keys().copied().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    trait Greeter {
        fn greet(&self) -> &'static str;
    }

    struct Hi;
    impl Greeter for Hi {
        fn greet(&self) -> &'static str {
            "hi"
        }
    }

    #[test]
    fn lookup_and_unknown() {
        let mut reg: Registry<dyn Greeter + Send + Sync> = Registry::new("greeter");
        reg.register("hi", Arc::new(Hi));
        assert_eq!(reg.get("hi").unwrap().greet(), "hi");
        match reg.get("yo") {
            Err(Error::UnknownStrategy { family, name, known }) => {
                assert_eq!(family, "greeter");
                assert_eq!(name, "yo");
                assert_eq!(known, "hi");
            }
            other => panic!("unexpected {:?}", other.map(|g| g.greet())),
        }
    }
}
