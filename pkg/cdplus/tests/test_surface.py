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
from cdplus.CDXFormat import read_sexprs, build_node, parse
from cdplus.Concepts import Illocution, Tone
from cdplus.Surface import TemplateSet, normalize
from cdplus.Exceptions import NoTemplate, AmbiguousTemplate, Unrecognized, SurfaceError

DIRECTIVE = "(cz :actor Person :act WANT :obj (cz :actor Robot :act PTRANS :obj Tool(X) :from Table :to Person))"

class SurfaceTests(unittest.TestCase):
	@classmethod
	def setUpClass(cls):
		cls.templates = TemplateSet.default()

	def setUp(self):
		self.store = CDStore()
		self.person = self.store.entity("Person")
		self.robot = self.store.entity("Robot")

	def cz(self, text: str) -> str:
		return build_node(self.store, read_sexprs(text)[0])

	def say(self, text: str, speaker, addressee, tone = Tone.Neutral):
		return self.templates.realize(self.store, self.cz(text), tone, speaker, addressee)

	def test_realize_fetch_dialogue(self):
		cases = [
			(DIRECTIVE, self.person, self.robot, Tone.Polite, "Robot, please bring me Tool(X) from the table.", Illocution.Directive),
			(DIRECTIVE, self.person, self.robot, Tone.Neutral, "Robot, I want you to bring me Tool(X) from the table.", Illocution.Directive),
			("(cz :actor Robot :act PTRANS :obj Tool(X) :from Table :to Person :mods (can neg))", self.robot, self.person, Tone.Neutral, "I cannot bring Tool(X) from the table to you.", Illocution.Inform),
			("(cz :actor Robot :act PTRANS :obj Tool(X) :to Person :mods (can neg qwhy))", self.person, self.robot, Tone.Polite, "Why can't you bring Tool(X) to me?", Illocution.WhyQuestion),
			("(cz :actor Tool(X) :act BE :to Table :mods (neg))", self.robot, self.person, Tone.Neutral, "Because Tool(X) is not on the table.", Illocution.Answer),
			("(cz :actor Robot :act PTRANS :obj Tool(X) :to Person :mods (past))", self.robot, self.person, Tone.Neutral, "Here is Tool(X).", Illocution.Inform),
		]
		for (text, speaker, addressee, tone, expected, illocution) in cases:
			with self.subTest(expected = expected):
				realization = self.say(text, speaker, addressee, tone)
				self.assertEqual(realization.text, expected)
				self.assertEqual(realization.illocution, illocution)

	def test_conditional_request_is_tone_free(self):
		text = "(cz :actor Person :act WANT :obj (cz :actor Robot :act PTRANS :obj Tool(X) :from Table :to Person :mods (c)))"
		for tone in (Tone.Polite, Tone.Neutral):
			self.assertEqual(self.say(text, self.person, self.robot, tone).text, "Robot, could you bring me Tool(X) from the table?")

	def test_recognize(self):
		recognition = self.templates.recognize("Robot, please bring me Tool(X) from the table.", self.store, self.person, self.robot)
		self.assertEqual(recognition.template_id, "T1")
		self.assertEqual(recognition.illocution, Illocution.Directive)
		self.assertEqual(self.store.canonicalize(recognition.cz_id), DIRECTIVE)

	def test_recognize_normalizes_quotes_and_spaces(self):
		self.assertEqual(normalize("Why  can’t you\tbring it?"), "Why can't you bring it?")
		recognition = self.templates.recognize("Why can’t you bring  Tool(X) to me?", self.store, self.person, self.robot)
		self.assertEqual(recognition.illocution, Illocution.WhyQuestion)
		self.assertEqual(self.store.canonicalize(recognition.cz_id), "(cz :actor Robot :act PTRANS :obj Tool(X) :to Person :mods (can neg qwhy))")

	def test_realize_then_recognize(self):
		said = self.say("(cz :actor Tool(X) :act BE :to Table :mods (neg))", self.robot, self.person)
		heard = self.templates.recognize(said.text, self.store, self.robot, self.person)
		self.assertEqual(self.store.canonicalize(heard.cz_id), "(cz :actor Tool(X) :act BE :to Table :mods (neg))")

	def test_unrecognized(self):
		with self.assertRaises(Unrecognized):
			self.templates.recognize("Hello there.", self.store, self.person, self.robot)
		with self.assertRaises(Unrecognized):
			self.templates.recognize("Here is the moon and stars.", self.store, self.robot, self.person)

	def test_no_template(self):
		with self.assertRaises(NoTemplate):
			self.say("(cz :actor Robot :act PUSH :obj Tool(X))", self.robot, self.person)
		with self.assertRaises(NoTemplate):
			self.templates.template("T99")

	def test_ambiguous(self):
		doc = parse("""
(template A :illocution inform :pattern (cz :actor ?speaker :act PUSH) :text "I move.")
(template B :illocution inform :pattern (cz :actor ?speaker :act PUSH) :text "I am moving.")
""")
		templates = TemplateSet.from_document(doc)
		with self.assertRaises(AmbiguousTemplate):
			templates.realize(self.store, self.cz("(cz :actor Robot :act PUSH)"), Tone.Neutral, self.robot, self.person)

	def test_unrecoverable_slot(self):
		doc = parse("(template A :illocution inform :pattern (cz :actor ?speaker :act PTRANS :obj ?object) :text \"I bring it.\")")
		with self.assertRaises(SurfaceError):
			TemplateSet.from_document(doc)

if __name__ == "__main__":
	unittest.main()
