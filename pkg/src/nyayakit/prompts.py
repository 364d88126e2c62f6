"""Prompt assembly for format-constrained generation."""

from __future__ import annotations

from typing import NamedTuple

SYSTEM_PROMPT = "You are a Nyaya reasoning engine. Follow the exact output format provided."

ORDER_BLOCK = """Required section order:
1) ## Samshaya (Doubt Analysis)
2) ## Pramana (Sources of Knowledge)
3) ## Pancha Avayava (5-Member Syllogism)
4) ## Tarka (Counterfactual Reasoning)
5) ## Hetvabhasa (Fallacy Check)
6) ## Nirnaya (Ascertainment)

CRITICAL:
- Response MUST start with: "## Samshaya"
- Copy the template exactly."""

TEMPLATE = """## Samshaya (Doubt Analysis)
**Doubt Type**:  **Justification**:
---
## Pramana (Sources of Knowledge)
### Pratyaksha (Direct Perception)
### Anumana (Inference)
### Upamana (Comparison)
### Shabda (Testimony)
---
## Pancha Avayava (5-Member Syllogism)
### Syllogism 1:
**Pratijna (Thesis)**: **Hetu (Reason)**:
**Udaharana (Universal + Example)**:
**Upanaya (Application)**:
**Nigamana (Conclusion)**:
---
## Tarka (Counterfactual Reasoning)
**Hypothesis**: **Consequence**:
**Analysis**: **Resolution**:
---
## Hetvabhasa (Fallacy Check)
Check for Savyabhichara / Viruddha /
  Asiddha / Satpratipaksha / Badhita
---
## Nirnaya (Ascertainment)
**Final Answer**: **Justification**:"""

REASONING_CUE = "### Nyaya Reasoning:"


class PromptBundle(NamedTuple):
    system: str
    user: str
    example_id: str | None = None


def assemble_prompt(problem: str, format_prompting: bool = True, example_id: str | None = None) -> PromptBundle:
    """System and user text for one problem.

    Without format prompting the user text is the problem verbatim. With
    it, the problem is followed by the section-order instructions, the
    skeletal template and the reasoning cue.
    """
    if not format_prompting:
        return PromptBundle(SYSTEM_PROMPT, problem, example_id)
    user = "\n\n".join(
        [
            "### Problem:\n" + problem.strip(),
            "### Instructions:\n" + ORDER_BLOCK,
            "### Template:\n" + TEMPLATE,
            REASONING_CUE,
        ]
    )
    return PromptBundle(SYSTEM_PROMPT, user + "\n", example_id)
