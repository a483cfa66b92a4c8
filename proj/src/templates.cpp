#include "budgetlab/prompts.hpp"

// Prompt text assets. Placeholders are spelled <domain>, <problem>, <level>,
// <query>, <reference>, <decomposed>, <budget>, <benchmarks>, <steps>;
// <instruction> and <output_format> mark the dataset-specific blocks.
// The literal "<think>" is a reasoning-model output cue, not a placeholder.

namespace budgetlab::templates {

const char* const kDecomposition = R"tpl(-Goal-
You are an experienced expert in <domain> and exam question designer. Your role is to help students break down challenging math problems into a series of simpler, high-level sub-questions.
We don't want too many detailed sub-questions, which are not beneficial for testing students' ability in an exam. Each sub-question should build on the previous one so that, once all have been answered, the complete solution is clear.
Your output should be a list of sub-questions with brief hints explaining the purpose of each step, but you should not reveal your internal chain-of-thought either the final solution.

Instructions for Decomposition:
First, analyze the problem and identify the key ideas needed to solve it. Then, generate a series of 2 to 5 sub-questions that lead the student step by step to the complete solution.
The difficulty level of the problem is presented out of 5, where 1 is easy, and 5 is hard. Please adjust the number of sub-questions based on the level. Ideally, we want fewer sub-questions for easy problems and more sub-questions for challenging problems.
DO NOT perform reasoning, directly output those sub-questions based on your gut feelings; only output the list of sub-questions with brief hints for each.
Your answer should be a list of numbered sub-questions. Each sub-question should have a brief accompanying hint that explains what the student will achieve by answering that part.

Example Decomposition:
**Problem:** Find the remainder when $(9 \times 99 \times 999 \times \cdots \times \underbrace{99\cdots 9}_{\text{999 9's}})$ is divided by 1000.
**Level:** 3 out of 5

**Decomposed Sub-questions:**

1. Compute the product modulo 8.
Hint: Simplify each term using $(10 \equiv 2 \mod 8)$, noting that $(10^k \equiv 0 \mod 8)$ for $k \geq 3$, leading to terms of $(-1 \mod 8)$.

2. Compute the product modulo 125.
Hint: Recognize $(10^3 \equiv 0 \mod 125)$, so terms for $(k \geq 3)$ become $(-1 \mod 125)$. Calculate the product of the first two terms and combine with the remaining terms.

3. Solve the system of congruences using the Chinese Remainder Theorem.
Hint: Combine the results from modulo 8 and modulo 125 to find a common solution modulo 1000.

A student has presented you with the following math problem:
Problem: <problem>
Level: <level> out of 5
**REMEMBER**, you are not allowed to think about it, please directly generate the answer in the following:
Decomposed Sub-questions:)tpl";

const char* const kDifficulty = R"tpl(You are an experienced expert in <domain> and exam question designer. Your task is to evaluate the difficulty level of a given exam problem and its sub-questions by comparing it against a set of benchmark questions of known levels.
Based on their levels, you will need to assign each subquestion a portion of the credits (assuming the total credit points is 100 for the whole problem).

Each level reflects increasing complexity from 1 (easiest) to 5 (most challenging). Evaluate based on the conceptual depth, steps involved in solving, required knowledge, and potential for misdirection.

Use the following benchmark examples as references:

<benchmarks>

1. You will be provided a question and its subquestions. You will evaluate the difficulty level of the problem and its sub-questions.
Assuming the whole problem is worth 100 points, you assign each sub-question a portion of the score points.
- Adhere to the given subquestions, and DO NOT make new subquestions.
- Sum of each subquestion's credits MUST EQUAL to 100.

2. You must return the result in a structured JSON format:
{
"problem": {"reason": "...", "evaluated_level": level_q}
"1": {"reason": "...", "evaluated_level": level_1, "credit": credit_1},
"2": {"reason": "...", "evaluated_level": level_2, "credit": credit_2},
...}
where
- "reason": a short explanation (up to 50 words) of your level assessment.
- "evaluated_level": an integer from 1 to 5 indicating your judgment.
- "credit": an integer between 1 to 100 indicating when the question is solved correctly, how many credit can be given.

Evaluate the level of the following question:
Problem: <problem>
Sub-questions: <steps>
Output:)tpl";

const char* const kVanilla = R"tpl(<instruction>

Please reason step by step, and conclude your answer in the following format:

<output_format>

Question: <query>
Reference: <reference>
Output: <think>)tpl";

const char* const kGlobalBudget = R"tpl(<instruction>

Please reason step by step, and conclude your answer in the following format:

<output_format>

Question: <query>
Reference: <reference>
Let's think step by step and use less than <budget> tokens.
Output: <think>)tpl";

const char* const kPlannedVanilla = R"tpl(<instruction>

The problem is given by an overall description, difficulty level out of 5, followed by a series of sub-questions as a hint.
All the credit is given when you provide a correct final answer for the overall problem.
Please solve the question efficiently and clearly to achieve as much credit as possible.

Let's start the exam. You are being given this math problem:
**Problem:** <query>
**Reference:** <reference>
**Level:** <level> out of 5

You may think following these sub-questions or feel free to use other methods that works the best towards getting the final answer:
<decomposed>

Please provide your final answer in the following format:
<output_format>

Output: <think>)tpl";

const char* const kPlannedGlobal = R"tpl(<instruction>

The problem is given by an overall description, difficulty level out of 5, followed by a series of sub-questions as a hint.
All the credit is given when you provide a correct final answer for the overall problem.
Please solve the question efficiently and clearly to achieve as much credit as possible.

Let's start the exam. You are being given this math problem:
**Problem:** <query>
**Reference:** <reference>
**Level:** <level> out of 5

You may think following these sub-questions or feel free to use other methods that works the best towards getting the final answer:
<decomposed>

Please provide your final answer in the following format:
<output_format>

Let's think step by step and use less than <budget> tokens.
Output: <think>)tpl";

const char* const kPlanAndBudget = R"tpl(<instruction>

The problem is given by an overall description, difficulty level out of 5, followed by a series of sub-questions as a hint.
All the credit is given when you provide a correct final answer for the overall problem.
Please solve the question efficiently and clearly to achieve as much credit as possible.

Let's start the exam. You are being given this math problem:
**Problem:** <query>
**Reference:** <reference>
**Level:** <level> out of 5

You may think following these sub-questions or feel free to use other methods that works the best towards getting the final answer:
<decomposed>

Please provide your final answer strictly following the format:
<output_format>

Output: <think>)tpl";

const char* const kLocalBudgetPhrase =
    "Please only think a little, and directly solve it using up to <budget> words.";

const char* const kGlobalBudgetPhrase =
    "Let's think step by step and use less than <budget> tokens.";

}  // namespace budgetlab::templates
