package coll;

public class LinkedList extends AbstractCollection {
    public Object get(int i) { return null; }
    public Object removeFirst() { return null; }
}
