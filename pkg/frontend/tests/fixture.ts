/** A small export covering every label kind: 3 comments, 2 arguments,
claim/ground/warrant, support/against, gold and predicted sources, one
fully non-argumentative comment, and one quote outside any argument. */

export function fixtureExport(): unknown {
  return {
    id: 4865,
    title: "Tabs freeze after update",
    comments: [
      { index: 0, author: "alice", created_at: "2020-01-01T00:00:00Z" },
      { index: 1, author: "bob", created_at: "2020-01-01T00:05:00Z" },
      { index: 2, author: "carol", created_at: "2020-01-01T00:09:00Z" },
    ],
    quotes: [
      {
        id: 0,
        comment_index: 0,
        span: [0, 24],
        text: "Please add proper tabs.",
        gold: { level1: "argumentative", component: "claim", standpoint: "support", argument_id: 1 },
        predicted: null,
      },
      {
        id: 1,
        comment_index: 0,
        span: [25, 60],
        text: "Every other editor has them.",
        gold: { level1: "argumentative", component: "ground", standpoint: "support", argument_id: 1 },
        predicted: null,
      },
      {
        id: 2,
        comment_index: 0,
        span: [61, 75],
        text: "Thanks for reading!",
        gold: { level1: "non_argumentative", component: null, standpoint: null, argument_id: null },
        predicted: null,
      },
      {
        id: 3,
        comment_index: 1,
        span: [0, 16],
        text: "Any news on this?",
        gold: { level1: "non_argumentative", component: null, standpoint: null, argument_id: null },
        predicted: null,
      },
      {
        id: 4,
        comment_index: 1,
        span: [17, 20],
        text: "+1",
        gold: null,
        predicted: { level1: "non_argumentative", component: null, standpoint: null, argument_id: null },
      },
      {
        id: 5,
        comment_index: 2,
        span: [0, 40],
        text: "Tabs would clutter the interface badly.",
        gold: { level1: "argumentative", component: "warrant", standpoint: "against", argument_id: 2 },
        predicted: null,
      },
      {
        id: 6,
        comment_index: 2,
        span: [41, 70],
        text: "Keep the working-files list instead.",
        gold: { level1: "argumentative", component: "claim", standpoint: "against", argument_id: 2 },
        predicted: null,
      },
      {
        id: 7,
        comment_index: 2,
        span: [71, 99],
        text: "The list already shows recency order.",
        gold: null,
        predicted: { level1: "argumentative", component: "ground", standpoint: "against", argument_id: null },
      },
    ],
    arguments: [
      { argument_id: 1, quote_ids: [0, 1] },
      { argument_id: 2, quote_ids: [5, 6] },
    ],
  };
}
