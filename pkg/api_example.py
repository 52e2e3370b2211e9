#!/usr/bin/env python3
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

import cdplus

# Run the whole dialogue and print what was said
scenario = cdplus.Scenario.from_file(cdplus.data_path("scenarios", "fetch_failure.cdx"))
trace = cdplus.run(scenario)
for text in trace.utterances():
	print(text)

# Ask why the Robot gave its last answer
answer = trace.of_kind(cdplus.EventKind.Utterance, "Robot")[-1]
cdplus.why(trace, answer.event_id).dump()

# Step a second run by hand and look inside the Robot after its first turn
runner = cdplus.DialogueRunner(cdplus.Scenario.from_file(cdplus.data_path("scenarios", "fetch_success.cdx")))
runner.step()
runner.step()
print(runner.agent("Robot").serialize())
runner.core.world.dump("  ")

# Build a conceptualization directly and print it in canonical form
store = cdplus.CDStore()
fetch = store.assert_cz(actor = store.entity("Robot"), act = cdplus.PrimitiveAct.PTRANS, obj = cdplus.EntityRef.parse("Tool(X)"), source = store.entity("Table"), to = store.entity("Person"))
print(store.canonicalize(fetch))
