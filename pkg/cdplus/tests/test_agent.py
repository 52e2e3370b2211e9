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
from cdplus.CDGraph import CDStore
from cdplus.CDXFormat import read_sexprs, build_node, data_path
from cdplus.Concepts import StateName, Illocution, EventKind
from cdplus.Agent import Agent, Message, prosp_match
from cdplus.Dialogue import Scenario
from cdplus.Trace import Trace
from cdplus.World import PhysicalCore
from cdplus.Exceptions import AgentError, NoModel

DIRECTIVE_TEXT = "Robot, please bring me Tool(X) from the table."
REPORT = "(cz :actor Robot :act PTRANS :obj Tool(X) :from Table :to Person :mods (can neg))"

def cz(store: CDStore, text: str) -> str:
	return build_node(store, read_sexprs(text)[0])

class AgentTests(unittest.TestCase):
	def setUp(self):
		scenario = Scenario.from_file(data_path("scenarios", "fetch_failure.cdx"))
		self.trace = Trace()
		self.core = PhysicalCore(scenario.world)
		(self.person, self.robot) = scenario.build_agents()
		for agent in (self.person, self.robot):
			agent.attach(self.trace, self.core)

	def kinds(self, agent: Agent, kind: EventKind) -> list[dict]:
		return [ event.payload for event in self.trace.events if (event.agent == agent.name) and (event.kind == kind) ]

	def test_person_opens_with_directive(self):
		result = self.person.step([ ], [ ], 1)
		outbox = result.outbox
		self.assertIs(result.state, self.person.state)
		self.assertEqual(result.effects[:2], [ ("R1", "assert-cz"), ("R2", "select-means") ])
		self.assertEqual(len(outbox), 1)
		self.assertEqual(outbox[0].text, DIRECTIVE_TEXT)
		self.assertEqual(outbox[0].illocution, "directive")
		self.assertEqual(outbox[0].addressee, "Robot")
		self.assertEqual(len(self.person.state.expc.prosp), 2)
		self.assertTrue(self.person.affect_active(StateName.ANTICIPATION))
		self.assertTrue(self.person.affect_active(StateName.HOPE))
		self.assertTrue(self.person.active)
		self.assertIsNone(self.person.state.bf)

	def test_robot_reports_failure(self):
		outbox = self.robot.step(self.person.step([ ], [ ], 1).outbox, [ ], 2).outbox
		self.assertEqual([ message.text for message in outbox ], [ "I cannot bring Tool(X) from the table to you." ])
		onsets = [ payload["state"] for payload in self.kinds(self.robot, EventKind.AffectOnset) ]
		self.assertEqual(onsets, [ "FRUSTRATED", "Displeased", "FEAR" ])
		self.assertEqual([ mconc.status for mconc in self.robot.state.motc ], [ "failed" ])
		self.assertEqual(len(self.robot.state.causes), 1)
		self.assertEqual(self.core.world.location_of("Tool(X)"), "Elsewhere")

	def test_simulating_the_other(self):
		self.robot.step(self.person.step([ ], [ ], 1).outbox, [ ], 2)
		store = self.robot.store
		predicted = [ store.canonicalize(node) for node in self.robot.sm_simulate(cz(store, REPORT), "Person", Illocution.Inform) ]
		self.assertEqual(len(predicted), 3)
		self.assertIn(":state DISAPPOINTED", predicted[0])
		self.assertIn(":state Displeased", predicted[1])
		self.assertEqual(predicted[2], "(cz :actor Robot :act PTRANS :obj Tool(X) :to Person :mods (can neg qwhy))")
		self.assertEqual([ entry.status for entry in self.robot.state.conc.models["Person"].prosp ], [ "open" ])

	def test_refusal_fails_the_person_want(self):
		directive = self.person.step([ ], [ ], 1).outbox
		self.assertEqual([ entry.mconc for entry in self.person.state.expc.prosp ], [ "Person-m1", "Person-m1" ])
		self.assertEqual([ mconc.status for mconc in self.person.state.motc ], [ "active" ])
		self.person.step(self.robot.step(directive, [ ], 2).outbox, [ ], 3)
		self.assertEqual([ mconc.status for mconc in self.person.state.motc ], [ "failed" ])
		statuses = [ event for event in self.trace.of_kind(EventKind.WantStatus, "Person") ]
		self.assertEqual([ (event.payload["mconc"], event.payload["status"]) for event in statuses ], [ ("Person-m1", "failed") ])
		self.assertEqual(self.trace.event(statuses[0].provenance[0]).kind, EventKind.ProspUpdate)
		self.assertEqual(self.trace.event(statuses[0].provenance[0]).payload["status"], "contradicted")

	def test_delivery_satisfies_the_person_want(self):
		scenario = Scenario.from_file(data_path("scenarios", "fetch_success.cdx"))
		trace = Trace()
		core = PhysicalCore(scenario.world)
		(person, robot) = scenario.build_agents()
		for agent in (person, robot):
			agent.attach(trace, core)
		person.step(robot.step(person.step([ ], [ ], 1).outbox, [ ], 2).outbox, [ ], 3)
		self.assertEqual([ mconc.status for mconc in person.state.motc ], [ "satisfied" ])
		statuses = trace.of_kind(EventKind.WantStatus, "Person")
		self.assertEqual([ event.payload["status"] for event in statuses ], [ "satisfied" ])
		self.assertEqual(trace.event(statuses[0].provenance[0]).payload["status"], "fulfilled")

	def test_simulation_needs_a_model(self):
		with self.assertRaises(NoModel):
			self.person.sm_simulate(cz(self.person.store, REPORT), "Nobody", Illocution.Inform)

	def test_garbage_is_heard_but_inert(self):
		result = self.robot.step([ "beep", Message(speaker = "Person", addressee = "Robot", text = "Make me a sandwich.") ], [ ], 1)
		self.assertEqual(result.outbox, [ ])
		self.assertEqual(result.effects, [ ])
		heard = self.kinds(self.robot, EventKind.Heard)
		self.assertEqual([ payload["illocution"] for payload in heard ], [ None, None ])
		self.assertFalse(self.robot.active)

	def test_step_preconditions(self):
		with self.assertRaises(AgentError):
			Scenario.from_file(data_path("scenarios", "fetch_failure.cdx")).build_agents()[0].step([ ], [ ], 1)
		self.person.step([ ], [ ], 1)
		with self.assertRaises(AgentError):
			self.person.step([ ], [ ], 1)

	def test_serialize(self):
		self.person.step([ ], [ ], 1)
		state = self.person.serialize()
		self.assertEqual(state["name"], "Person")
		self.assertEqual(state["tone"], "polite")
		self.assertEqual(state["ct_phase"], "act")
		self.assertEqual(state["motc"][0]["id"], "Person-m1")
		self.assertEqual(sorted(affect["state"] for affect in state["affects"]), [ "ANTICIPATION", "HOPE" ])

class ProspMatchTests(unittest.TestCase):
	def setUp(self):
		self.store = CDStore()
		self.expected = cz(self.store, "(cz :actor Robot :act PTRANS :obj Tool(X) :from Table :to Person :mods (can))")

	def test_statuses(self):
		cases = [
			("(cz :actor Robot :act PTRANS :obj Tool(X) :to Person :mods (past))", "fulfilled"),
			(REPORT, "contradicted"),
			("(cz :actor Robot :act PTRANS :obj Tool(X) :to Person :mods (qwhy))", None),
			("(cz :actor Robot :act PTRANS :obj Tool(Y) :to Person :mods (past))", None),
		]
		for (text, status) in cases:
			with self.subTest(text = text):
				self.assertEqual(prosp_match(self.store, self.expected, cz(self.store, text)), status)

	def test_wanted_action(self):
		want = cz(self.store, "(cz :actor Robot :act WANT :obj (cz :actor Robot :act PTRANS :obj Tool(X) :from Table :to Person))")
		self.assertEqual(prosp_match(self.store, want, cz(self.store, "(cz :actor Robot :act PTRANS :obj Tool(X) :to Person :mods (past))")), "fulfilled")
		self.assertIsNone(prosp_match(self.store, want, cz(self.store, REPORT)))

if __name__ == "__main__":
	unittest.main()
