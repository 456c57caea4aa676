@Test
public void testKeys() {
    List<String> k = new ArrayList<>(m.keySet());
    Collections.sort(k);
}