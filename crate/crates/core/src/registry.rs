//! Name-keyed registries of interchangeable strategies.
//!
//! Homology backends, fibered models and built-in diagrams are all looked up
//! by a short identifier at runtime (usually straight from a CLI flag).

use std::collections::BTreeMap;
use std::fmt;

/// Anything that can be stored in a [`Registry`].
pub trait Named {
    fn name(&self) -> &'static str;
}

/// A registry of trait objects keyed by [`Named::name`].
pub struct Registry<T: ?Sized + Named> {
    entries: BTreeMap<&'static str, Box<T>>,
}

impl<T: ?Sized + Named> Registry<T> {
    pub fn new() -> Self {
        Self {
            entries: BTreeMap::new(),
        }
    }

    /// Register an entry, replacing any previous entry with the same name.
    pub fn register(&mut self, entry: Box<T>) {
        self.entries.insert(entry.name(), entry);
    }

    pub fn with(mut self, entry: Box<T>) -> Self {
        self.register(entry);
        self
    }

    pub fn get(&self, name: &str) -> Option<&T> {
        self.entries.get(name).map(|b| b.as_ref())
    }

    /// Registered names in sorted order.
    pub fn names(&self) -> Vec<&'static str> {
        self.entries.keys().copied().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &T> {
        self.entries.values().map(|b| b.as_ref())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl<T: ?Sized + Named> Default for Registry<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: ?Sized + Named> fmt::Debug for Registry<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.entries.keys()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    trait Greeter: Named {
        fn greet(&self) -> String;
    }

    struct Hello;
    impl Named for Hello {
        fn name(&self) -> &'static str {
            "hello"
        }
    }
    impl Greeter for Hello {
        fn greet(&self) -> String {
            "hello".into()
        }
    }

    struct Bye;
    impl Named for Bye {
        fn name(&self) -> &'static str {
            "bye"
        }
    }
    impl Greeter for Bye {
        fn greet(&self) -> String {
            "bye".into()
        }
    }

    #[test]
    fn lookup_by_name() {
        let reg = Registry::<dyn Greeter>::new().with(Box::new(Hello)).with(Box::new(Bye));
        assert_eq!(reg.names(), vec!["bye", "hello"]);
        assert_eq!(reg.get("hello").unwrap().greet(), "hello");
        assert!(reg.get("nope").is_none());
        assert_eq!(reg.len(), 2);
    }
}
