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

import unittest
from cdplus.CDGraph import CDStore, EntityRef
from cdplus.CDXFormat import parse_file, validate, data_path
from cdplus.Concepts import PrimitiveAct, StateName, Modifier, LinkKind
from cdplus.Exceptions import DanglingRef, LabelClash, BadObject, ModifierConflict, SelfCause, TemporalCycle, ElaborationCycle

class CDStoreTests(unittest.TestCase):
	def setUp(self):
		self.store = CDStore()
		self.person = self.store.entity("Person")
		self.robot = self.store.entity("Robot")
		self.tool = EntityRef.parse("Tool(X)")
		self.fetch = self.store.assert_cz(actor = self.robot, act = PrimitiveAct.PTRANS, obj = self.tool, source = self.store.entity("Table"), to = self.person)

	def test_entity_parse(self):
		self.assertEqual(self.tool.name, "Tool")
		self.assertEqual(self.tool.param, "X")
		self.assertEqual(str(self.tool), "Tool(X)")
		self.assertTrue(EntityRef.is_entity_symbol("Robot"))
		self.assertFalse(EntityRef.is_entity_symbol("?x"))

	def test_canonical_form(self):
		self.assertEqual(self.store.canonicalize(self.fetch), "(cz :actor Robot :act PTRANS :obj Tool(X) :from Table :to Person)")
		want = self.store.assert_cz(actor = self.person, act = PrimitiveAct.WANT, obj = self.fetch, mods = [ Modifier.f, Modifier.c ])
		self.assertEqual(self.store.canonicalize(want), "(cz :actor Person :act WANT :obj (cz :actor Robot :act PTRANS :obj Tool(X) :from Table :to Person) :mods (c f))")

	def test_want_of_entity_is_wrapped(self):
		want = self.store.assert_cz(actor = self.person, act = PrimitiveAct.WANT, obj = self.tool)
		inner = self.store.cz(self.store.cz(want).obj)
		self.assertEqual(inner.act, PrimitiveAct.PTRANS)
		self.assertEqual(inner.to, self.person)
		self.assertEqual(inner.actor.name, "Someone")

	def test_conceptual_act_needs_object(self):
		with self.assertRaises(BadObject):
			self.store.assert_cz(actor = self.person, act = PrimitiveAct.WANT)
		with self.assertRaises(BadObject):
			self.store.assert_cz(actor = self.person, act = PrimitiveAct.CONCP, obj = self.tool)

	def test_state_only_on_be(self):
		with self.assertRaises(BadObject):
			self.store.assert_cz(actor = self.person, act = PrimitiveAct.PTRANS, state = StateName.Pleased)
		pleased = self.store.assert_cz(actor = self.person, act = PrimitiveAct.BE, state = StateName.Pleased)
		self.assertEqual(self.store.cz(pleased).state.name, StateName.Pleased)

	def test_dangling_reference(self):
		with self.assertRaises(DanglingRef):
			self.store.assert_cz(actor = self.person, act = PrimitiveAct.WANT, obj = "c999")
		with self.assertRaises(DanglingRef):
			self.store.cz("c999")

	def test_modifier_conflicts(self):
		with self.assertRaises(ModifierConflict):
			self.store.assert_cz(actor = self.robot, act = PrimitiveAct.PTRANS, obj = self.tool, mods = [ Modifier.f, Modifier.past ])
		question = self.store.assert_cz(actor = self.robot, act = PrimitiveAct.PTRANS, obj = self.tool, mods = [ Modifier.can, Modifier.neg, Modifier.qwhy ])
		with self.assertRaises(ModifierConflict):
			self.store.assert_cz(actor = self.person, act = PrimitiveAct.WANT, obj = question)

	def test_labels(self):
		labeled = self.store.assert_cz(actor = self.person, act = PrimitiveAct.BE, state = StateName.Pleased, label = "goal")
		self.assertEqual(self.store.resolve_label("goal"), labeled)
		with self.assertRaises(LabelClash):
			self.store.assert_cz(actor = self.person, act = PrimitiveAct.BE, state = StateName.Displeased, label = "goal")

	def test_causal_links(self):
		pleased = self.store.assert_cz(actor = self.person, act = PrimitiveAct.BE, state = StateName.Pleased, mods = [ Modifier.f ])
		link = self.store.add_link(LinkKind.Causal, (self.fetch, pleased), mods = [ Modifier.c, Modifier.f ])
		self.assertEqual(self.store.link(link).cause, self.fetch)
		self.assertEqual(self.store.link(link).effect, pleased)
		with self.assertRaises(SelfCause):
			self.store.add_link(LinkKind.Causal, (self.fetch, self.fetch))
		with self.assertRaises(BadObject):
			self.store.add_link(LinkKind.Causal, (pleased, self.fetch), mods = [ Modifier.c, Modifier.f ])

	def test_temporal_cycle(self):
		second = self.store.assert_cz(actor = self.person, act = PrimitiveAct.MBUILD, obj = self.fetch)
		third = self.store.assert_cz(actor = self.person, act = PrimitiveAct.MTRANS, obj = self.fetch, to = self.robot)
		self.store.add_link(LinkKind.Temporal, (self.fetch, second))
		self.store.add_link(LinkKind.Temporal, (second, third))
		with self.assertRaises(TemporalCycle):
			self.store.add_link(LinkKind.Temporal, (third, self.fetch))

	def test_elaborate_want(self):
		want = self.store.assert_cz(actor = self.person, act = PrimitiveAct.WANT, obj = self.fetch)
		concp = self.store.elaborate_want(want)
		self.assertEqual(self.store.cz(concp).act, PrimitiveAct.CONCP)
		link = self.store.link(self.store.cz(concp).obj)
		self.assertEqual(link.cause, self.fetch)
		self.assertEqual(link.mods, frozenset([ Modifier.c, Modifier.f ]))
		self.assertEqual(self.store.canonicalize(link.effect), "(cz :actor Person :act BE :state Pleased :mods (f))")

	def test_restate(self):
		question = self.store.restate(self.fetch, mods = [ Modifier.can, Modifier.neg, Modifier.qwhy ], drop = [ "source" ])
		self.assertEqual(self.store.canonicalize(question), "(cz :actor Robot :act PTRANS :obj Tool(X) :to Person :mods (can neg qwhy))")
		delegated = self.store.restate(self.fetch, actor = self.person)
		self.assertEqual(self.store.cz(delegated).actor, self.person)
		self.assertEqual(self.store.cz(delegated).mods, frozenset())

	def test_canonical_core(self):
		report = self.store.restate(self.fetch, mods = [ Modifier.can, Modifier.neg ])
		question = self.store.restate(self.fetch, mods = [ Modifier.can, Modifier.neg, Modifier.qwhy ], drop = [ "source" ])
		core = dict(ignore_mods = list(Modifier), ignore_roles = ("source", ))
		self.assertEqual(self.store.canonical_core(report, **core), self.store.canonical_core(question, **core))
		self.assertNotEqual(self.store.canonicalize(report), self.store.canonicalize(question))

	def test_ground_check(self):
		want = self.store.assert_cz(actor = self.person, act = PrimitiveAct.WANT, obj = self.fetch)
		self.assertEqual(self.store.ground_check(want), [ "WANT", "PTRANS" ])
		self.store.add_anchor("sa-want", uri = "cd:act/WANT", symbol = "WANT")
		self.store.add_elaboration("PTRANS", [ self.store.assert_cz(actor = self.robot, act = PrimitiveAct.PUSH, obj = self.tool) ])
		self.assertEqual(self.store.ground_check(want), [ "PUSH" ])
		with self.assertRaises(LabelClash):
			self.store.add_anchor("sa-want")

	def test_elaboration_cycle(self):
		push = self.store.assert_cz(actor = self.robot, act = PrimitiveAct.PUSH, obj = self.tool)
		self.store.add_elaboration("PTRANS", [ push ])
		self.store.add_elaboration("PUSH", [ self.store.assert_cz(actor = self.robot, act = PrimitiveAct.PTRANS, obj = self.tool) ])
		with self.assertRaises(ElaborationCycle):
			self.store.ground_check(self.fetch)

	def test_import_and_copy(self):
		want = self.store.assert_cz(actor = self.person, act = PrimitiveAct.WANT, obj = self.fetch)
		copied = self.store.copy()
		copied.assert_cz(actor = self.robot, act = PrimitiveAct.BE, state = StateName.FEAR)
		self.assertEqual(len(copied), len(self.store) + 1)
		other = CDStore()
		imported = other.import_subtree(self.store, want)
		self.assertEqual(other.canonicalize(imported), self.store.canonicalize(want))

class DoorKnowledgeTests(unittest.TestCase):
	def setUp(self):
		self.doc = parse_file(data_path("kb", "fig1.cdx"))
		self.store = self.doc.store
		self.push = self.store.resolve_label("push")

	def pushes_open(self, store: CDStore) -> str:
		return store.find_links(LinkKind.Causal, source = store.resolve_label("push"))[0].link_id

	def test_push_elaborates_into_ordered_steps(self):
		script = self.store.elaborations["PUSH"].script
		self.assertEqual([ self.store.canonicalize(step) for step in script ], [
			"(cz :actor Person :act PTRANS :obj Palm :to Door)",
			"(cz :actor Person :act PTRANS :obj Door :inst Palm)",
		])
		self.assertEqual(len(self.store.find_links(LinkKind.Temporal, source = script[0], target = script[1])), 1)
		self.assertEqual(self.store.intern(EntityRef("Door")).anchor, "sa-door")

	def test_everything_is_grounded(self):
		for root in self.doc.roots():
			with self.subTest(root = self.store.canonicalize(root)):
				self.assertEqual(self.store.ground_check(root), [ ])
		self.assertEqual(validate(self.doc), [ ])
		self.assertEqual(self.store.ground_check(self.push, elaborations = { }), [ "PUSH" ])

	def test_push_script_containing_push(self):
		door = self.store.entity("Door")
		self.store.add_elaboration("PUSH", [ self.store.assert_cz(actor = self.store.entity("Person"), act = PrimitiveAct.PUSH, obj = door) ])
		with self.assertRaises(ElaborationCycle):
			self.store.ground_check(self.push)

	def test_independent_copies_are_equal(self):
		expected = "(causal (cz :actor Person :act PUSH :obj Door) (cz :actor Door :act BE :state Open))"
		self.assertEqual(self.store.canonicalize(self.pushes_open(self.store)), expected)
		again = parse_file(data_path("kb", "fig1.cdx")).store
		self.assertEqual(again.canonicalize(self.pushes_open(again)), expected)

		store = CDStore()
		opened = store.assert_cz(actor = store.entity("Door"), act = PrimitiveAct.BE, state = StateName.Open)
		pushed = store.assert_cz(actor = store.entity("Person"), act = PrimitiveAct.PUSH, obj = store.entity("Door"))
		self.assertEqual(store.canonicalize(store.add_link(LinkKind.Causal, (pushed, opened))), expected)

	def test_pushing_and_wanting_differ(self):
		wanting = self.store.resolve_label("if-open")
		self.assertNotEqual(self.store.canonicalize(self.pushes_open(self.store)), self.store.canonicalize(self.store.cz(wanting).obj))
		self.assertNotEqual(self.store.canonicalize(self.push), self.store.canonicalize(wanting))

	def test_written_conditional_matches_elaborated_want(self):
		elaborated = self.store.elaborate_want(self.store.resolve_label("want"))
		self.assertEqual(self.store.canonicalize(elaborated), self.store.canonicalize(self.store.resolve_label("if-open")))
		self.assertIn(":mods (c f)", self.store.canonicalize(elaborated))

	def test_canonical_core_of_push(self):
		unable = self.store.restate(self.push, mods = [ Modifier.can, Modifier.neg ])
		self.assertNotEqual(self.store.canonicalize(unable), self.store.canonicalize(self.push))
		self.assertEqual(self.store.canonical_core(unable, ignore_mods = [ Modifier.can, Modifier.neg ]), self.store.canonicalize(self.push))
		self.assertEqual(self.store.canonical_core(self.push, ignore_roles = ("obj", )), "(cz :actor Person :act PUSH)")

if __name__ == "__main__":
	unittest.main()
