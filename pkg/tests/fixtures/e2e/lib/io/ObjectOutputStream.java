package io;

public class ObjectOutputStream extends OutputStream {
    public ObjectOutputStream(OutputStream out) { }
    public void writeObject(Object o) { }
}
