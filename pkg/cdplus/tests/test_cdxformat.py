#	cdplus - CD+ knowledge representation engine and dialogue simulator
#	Copyright (C) 2024 the cdplus authors
#
#	This file is part of cdplus.
#
#	cdplus is free software; you can redistribute it and/or modify
#	it under the terms of the GNU General Public License as published by
#	the Free Software Foundation; this program is ONLY licensed under
#	version 3 of the License, later versions are explicitly excluded.
#
#	cdplus is distributed in the hope that it will be useful,
#	but WITHOUT ANY WARRANTY; without even the implied warranty of
#	MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
#	GNU General Public License for more details.
#
#	You should have received a copy of the GNU General Public License
#	along with cdplus; if not, write to the Free Software
#	Foundation, Inc., 59 Temple Place, Suite 330, Boston, MA  02111-1307  USA

import os
import random
import unittest
from cdplus.CDXFormat import parse, parse_file, serialize, validate, read_sexprs, layout, data_path, SAtom, SList
from cdplus.Exceptions import CDXSyntaxError, UnknownAct, UnknownState, DanglingLabelRef

ENTITIES = ("Person", "Robot", "Table", "Tool(X)", "Tool(Y)", "Kitchen")
PLAIN_MODS = ("c", "f", "can", "neg", "past")

def _random_mods(rng: random.Random) -> list[str]:
	mods = [ mod for mod in PLAIN_MODS if rng.random() < 0.25 ]
	if ("f" in mods) and ("past" in mods):
		mods.remove("past")
	return mods

def _random_cz(rng: random.Random, depth: int, labels: list[str]) -> str:
	actor = rng.choice(ENTITIES[:2])
	parts = [ "cz", ":actor", actor ]
	if (depth > 0) and (rng.random() < 0.4):
		parts += [ ":act", rng.choice([ "WANT", "CONCP", "ANTICIPATE" ]) ]
		if (len(labels) > 0) and (rng.random() < 0.3):
			parts += [ ":obj", "#" + rng.choice(labels) ]
		else:
			parts += [ ":obj", _random_cz(rng, depth - 1, labels) ]
	elif rng.random() < 0.3:
		parts += [ ":act", "BE", ":state", rng.choice([ "Pleased", "Displeased", "HOPE" ]) ]
	else:
		parts += [ ":act", rng.choice([ "PTRANS", "PUSH", "MTRANS" ]), ":obj", rng.choice(ENTITIES[2:]) ]
		if rng.random() < 0.5:
			parts += [ ":from", rng.choice(ENTITIES) ]
		if rng.random() < 0.5:
			parts += [ ":to", rng.choice(ENTITIES) ]
	mods = _random_mods(rng)
	if len(mods) > 0:
		parts += [ ":mods", "(%s)" % (" ".join(mods)) ]
	return "(%s)" % (" ".join(parts))

def random_document(seed: int) -> str:
	rng = random.Random(seed)
	lines = [ ]
	labels = [ ]
	if rng.random() < 0.5:
		lines.append("(anchor sa-%d :uri \"cd:act/PTRANS\" :for PTRANS)" % (seed))
	for index in range(rng.randint(1, 5)):
		text = _random_cz(rng, 2, labels)
		if rng.random() < 0.4:
			label = "L%d" % (index)
			text = text[:-1] + " :label %s)" % (label)
			labels.append(label)
		lines.append(text)
	if len(labels) >= 2:
		(first, second) = rng.sample(labels, 2)
		lines.append("(temporal #%s #%s)" % (first, second))
		lines.append("(causal #%s #%s :mods (%s))" % (first, second, rng.choice([ "c", "f", "" ])))
	if rng.random() < 0.3:
		lines.append("(state-attr Tool(X) Open (cz :actor Robot :act PUSH :obj Tool(X)))")
	return "\n".join(lines) + "\n"

class ReaderTests(unittest.TestCase):
	def test_atoms_and_positions(self):
		forms = read_sexprs("; comment\n(cz :actor Tool(X) :act BE\n    :to Table) \"a \\\"quoted\\\" string\" 42")
		self.assertEqual(len(forms), 3)
		self.assertIsInstance(forms[0], SList)
		self.assertEqual(forms[0].items[2].value, "Tool(X)")
		self.assertEqual(forms[0].line, 2)
		self.assertEqual(forms[1].kind, "string")
		self.assertEqual(forms[1].value, "a \"quoted\" string")
		self.assertEqual(forms[2].kind, "int")

	def test_syntax_error_position(self):
		with self.assertRaises(CDXSyntaxError) as context:
			read_sexprs("(cz :actor Robot\n  :act PTRANS")
		self.assertGreaterEqual(context.exception.line, 1)

	def test_duplicate_keyword(self):
		with self.assertRaises(CDXSyntaxError):
			parse("(cz :actor Robot :act BE :act PTRANS)")

	def test_unknown_act_and_state(self):
		with self.assertRaises(UnknownAct) as context:
			parse("(cz :actor Robot\n    :act FLY)")
		self.assertEqual(context.exception.line, 2)
		with self.assertRaises(UnknownState):
			parse("(cz :actor Robot :act BE :state Sleepy)")
		with self.assertRaises(UnknownAct):
			parse("(rule R :priority 1 (on heard :match (cz :actor ?x :act FLY)) (do (fail-want ?x)))")

	def test_graph_errors_are_positioned(self):
		with self.assertRaises(CDXSyntaxError) as context:
			parse("(cz :actor Robot :act BE :state Pleased :label a)\n(causal #a #a)")
		self.assertEqual(context.exception.line, 2)
		self.assertIn("SelfCause", context.exception.msg)

	def test_dangling_label(self):
		with self.assertRaises(DanglingLabelRef):
			parse("(cz :actor Person :act WANT :obj #nowhere)")
		doc = parse("(cz :actor Person :act WANT :obj #nowhere)\n(cz :actor Robot :act BE :state Pleased)", strict = False)
		self.assertEqual([ problem.code for problem in doc.problems ], [ "dangling-ref" ])
		self.assertEqual(len(doc.roots()), 1)

	def test_duplicate_label_lenient(self):
		text = "(cz :actor Robot :act BE :state Pleased :label a)\n(cz :actor Robot :act BE :state HOPE :label a)"
		with self.assertRaises(CDXSyntaxError):
			parse(text)
		doc = parse(text, strict = False)
		self.assertEqual([ problem.code for problem in doc.problems ], [ "duplicate-label" ])

	def test_empty_document(self):
		doc = parse("")
		self.assertEqual(doc.items, [ ])
		self.assertEqual(validate(doc), [ ])
		self.assertEqual(serialize(doc), "")

class SerializerTests(unittest.TestCase):
	def test_shared_label_printed_once(self):
		doc = parse("(cz :actor Robot :act PTRANS :obj Tool(X) :label fetch)\n(cz :actor Person :act WANT :obj #fetch)")
		text = serialize(doc)
		self.assertEqual(text.count(":label fetch"), 1)
		self.assertIn(":obj #fetch", text)

	def test_layout_wraps_long_forms(self):
		form = read_sexprs("(cz :actor Person :act WANT :obj (cz :actor Robot :act PTRANS :obj Tool(X) :from Table :to Person :mods (can)) :mods (f))")[0]
		text = layout(form)
		self.assertGreater(len(text.splitlines()), 1)
		self.assertTrue(all(len(line) <= 78 for line in text.splitlines()))
		self.assertEqual(read_sexprs(text)[0].flat(), form.flat())

	def test_generated_round_trip(self):
		for seed in range(120):
			with self.subTest(seed = seed):
				doc = parse(random_document(seed))
				text = serialize(doc)
				reparsed = parse(text)
				self.assertTrue(doc.structurally_equal(reparsed), text)
				self.assertEqual(serialize(reparsed), text)

	def test_string_round_trip(self):
		for uri in ("pc/Tür-Straße.ply", "mesh/\"lid\".obj", "C:\\scans\\box.ply", "Ωμέγα"):
			with self.subTest(uri = uri):
				form = read_sexprs("(anchor sa-door :uri %s :for PUSH)" % (SAtom(value = uri, kind = "string").flat()))[0]
				self.assertEqual(form.items[3].value, uri)
				doc = parse(form.flat())
				text = serialize(doc)
				reparsed = parse(text)
				self.assertTrue(doc.structurally_equal(reparsed), text)
				self.assertEqual(serialize(reparsed), text)

	def test_non_ascii_written_verbatim(self):
		text = serialize(parse("(anchor sa-door :uri \"pc/Tür-Straße.ply\" :for PUSH)"))
		self.assertIn("\"pc/Tür-Straße.ply\"", text)
		self.assertNotIn("\\u", text)

	def test_bundled_files_round_trip(self):
		for (directory, _, filenames) in os.walk(data_path()):
			for filename in sorted(filenames):
				if not filename.endswith(".cdx"):
					continue
				with self.subTest(filename = filename):
					doc = parse_file(os.path.join(directory, filename))
					reparsed = parse(serialize(doc))
					self.assertTrue(doc.structurally_equal(reparsed))

class ValidateTests(unittest.TestCase):
	def test_ungrounded_symbols_reported_once(self):
		doc = parse("(cz :actor Robot :act PTRANS :obj Tool(X))\n(cz :actor Robot :act PTRANS :obj Tool(Y))")
		diagnostics = validate(doc)
		self.assertEqual([ diagnostic.code for diagnostic in diagnostics ], [ "ungrounded-symbol" ])
		self.assertIn("PTRANS", diagnostics[0].message)

	def test_anchor_and_elaboration_ground(self):
		doc = parse("\n".join([
			"(anchor sa-push :for PUSH)",
			"(elab PTRANS (cz :actor Robot :act PUSH :obj Tool(X)))",
			"(cz :actor Robot :act PTRANS :obj Tool(X))",
		]))
		self.assertEqual(validate(doc), [ ])

	def test_elaboration_cycle(self):
		doc = parse("\n".join([
			"(elab PTRANS (cz :actor Robot :act PUSH :obj Tool(X)))",
			"(elab PUSH (cz :actor Robot :act PTRANS :obj Tool(X)))",
			"(cz :actor Robot :act PTRANS :obj Tool(X))",
		]))
		self.assertEqual([ diagnostic.code for diagnostic in validate(doc) ], [ "elaboration-cycle" ])

	def test_bundled_rulebase_is_clean(self):
		self.assertEqual(validate(parse_file(data_path("rules", "builtin.cdx"))), [ ])

if __name__ == "__main__":
	unittest.main()
