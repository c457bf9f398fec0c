//! Opaque identifiers shared by the corpus and the derived networks.

use std::borrow::Borrow;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

macro_rules! id_type {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        #[serde(transparent)]
        pub struct $name(Arc<str>);

        impl $name {
            pub fn new(id: impl AsRef<str>) -> Self {
                Self(Arc::from(id.as_ref()))
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{:?}", &*self.0)
            }
        }

        impl From<&str> for $name {
            fn from(s: &str) -> Self {
                Self::new(s)
            }
        }

        impl From<String> for $name {
            fn from(s: String) -> Self {
                Self(Arc::from(s))
            }
        }

        impl Borrow<str> for $name {
            fn borrow(&self) -> &str {
                &self.0
            }
        }

        impl AsRef<str> for $name {
            fn as_ref(&self) -> &str {
                &self.0
            }
        }
    };
}

id_type!(
    /// A vocabulary entry, keyed by its normalized surface form.
    WordId
);
id_type!(NoteId);
id_type!(AgentId);
id_type!(
    /// A node of a derived network. The network's kind says which of the
    /// typed identifiers it came from.
    NodeId
);

macro_rules! into_node {
    ($($name:ident),*) => {
        $(
            impl From<$name> for NodeId {
                fn from(id: $name) -> Self {
                    NodeId(id.0)
                }
            }

            impl From<&$name> for NodeId {
                fn from(id: &$name) -> Self {
                    NodeId(Arc::clone(&id.0))
                }
            }
        )*
    };
}

into_node!(WordId, NoteId, AgentId);
