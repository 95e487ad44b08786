"""Kripke semantics workbench for intuitionistic, Gödel-Dummett and classical propositional logic."""
